//! A t prior against a normal base for a location-normal sample: the check at
//! one level, the uniform check, and how the verdict moves with the t scale.

use priorinfo::modelprior::{PriorSpec, SampleSize, SamplingModel};
use priorinfo::weakinfo::Comparison;

fn main() -> priorinfo::Result<()> {
    let model = SamplingModel::LocationNormal { k: 1, n: SampleSize::Finite(20) };
    let base = PriorSpec::normal1(0.0, 1.0)?;
    for scale_sq in [0.1, 1.0 / 3.0, 1.0, 4.0] {
        let alt = PriorSpec::student_t1(0.0, scale_sq, 3.0)?;
        let v = Comparison::new(&model, &base, &alt)?.full_verdict(0.05)?;
        println!(
            "t_3 scale^2 = {scale_sq:.4}: conflict prob {:.5} (x = {:.3}), {}",
            v.conflict_prob,
            v.x_gamma,
            v.classification()
        );
    }
    Ok(())
}
