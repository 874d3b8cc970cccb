//! Gamma priors on a normal precision: the limiting rate check and a
//! finite-n comparison on the scale-normal model.

use priorinfo::closedform::gamma_rate_check;
use priorinfo::modelprior::{PriorSpec, SampleSize, SamplingModel};
use priorinfo::weakinfo::Comparison;

fn main() -> priorinfo::Result<()> {
    let (a1, b1) = (3.0, 2.0);
    let model = SamplingModel::ScaleNormal { n: SampleSize::Finite(30) };
    let base = PriorSpec::gamma_rate(a1, b1)?;
    for (a2, b2) in [(1.0, 1.0), (1.0, 0.5), (3.0, 2.0), (10.0, 5.0), (1.0, 3.0)] {
        let limit = gamma_rate_check(a1, b1, a2, b2)?;
        let v = Comparison::new(&model, &base, &PriorSpec::gamma_rate(a2, b2)?)?.verdict(0.05)?;
        println!("Gamma({a2}, {b2}): limit {limit:?}, n = 30 conflict prob {:.5} ({:?})", v.conflict_prob, v.level);
    }
    Ok(())
}
