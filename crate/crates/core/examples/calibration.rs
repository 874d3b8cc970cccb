//! Choosing the alternative's variance to hit a target reduction.

use priorinfo::closedform::{calibrate_normal, calibrate_t};
use priorinfo::modelprior::SampleSize;

fn main() -> priorinfo::Result<()> {
    for p in [0.25, 0.5, 0.75] {
        let nn = calibrate_normal(SampleSize::Finite(20), 1.0, 0.05, p)?;
        let ni = calibrate_normal(SampleSize::Infinite, 1.0, 0.05, p)?;
        let tf = calibrate_t(SampleSize::Finite(20), 3.0, 1.0, 0.05, p)?;
        let ti = calibrate_t(SampleSize::Infinite, 3.0, 1.0, 0.05, p)?;
        println!(
            "p = {p}: normal {:.4} (n = 20) {:.4} (limit); t_3 {:.4} (n = 20) {:.4} (limit)",
            nn.parameter, ni.parameter, tf.parameter, ti.parameter
        );
    }
    Ok(())
}
