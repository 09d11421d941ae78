use betadyn_core::islands::*;
use betadyn_core::maps::Beta;
fn main() {
    let eps = 0.12;
    let base = IslandMapSpec::new(IslandFamily::Kink, Beta::new(1.5).unwrap(), eps).unwrap()
        .with_sigma(1.0).with_power(5.0);
    let g = GridSpec { beta_min: 1.2, beta_max: 1.999, eps_min: eps, eps_max: eps, beta_steps: 160, eps_steps: 1 };
    let scan = tongue_scan(IslandFamily::Kink, &g, &base, 0.009, 512, 9);
    for (j, (&b, &t)) in scan.spec_beta.iter().zip(&scan.times[0]).enumerate() {
        if j % 2 == 0 { println!("beta {b:.4}  mean-rec {t:.1}"); }
    }
}
