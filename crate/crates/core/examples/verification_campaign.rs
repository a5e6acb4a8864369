use kpartite_hall::campaign::{run_campaign, CampaignConfig, Property};

fn main() {
    let config = CampaignConfig {
        trials: 200,
        seed: 7,
        k_values: vec![2, 3, 4],
        t_values: vec![1, 2, 3, 4, 5],
        ..CampaignConfig::default()
    };
    let report = run_campaign(&config).unwrap();
    print!("{}", report.to_text());
    let k2 = report.property(Property::K2Reduction).unwrap();
    println!("bipartite reduction: {}/{} passed", k2.passed, k2.trials);
    std::process::exit(if report.all_passed { 0 } else { 1 });
}
