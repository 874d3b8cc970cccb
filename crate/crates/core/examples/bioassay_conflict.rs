//! Prior-data conflict for the four-dose bioassay under a normal and a
//! Cauchy prior on the coefficients.

use priorinfo::conflict::conflict_pvalue;
use priorinfo::modelprior::{LogisticDesign, PriorSpec, SamplingModel, SufficientStat};

fn main() -> priorinfo::Result<()> {
    let model = SamplingModel::Logistic(LogisticDesign::bioassay());
    let observed = SufficientStat::Counts(vec![0, 1, 3, 5]);
    let normal = PriorSpec::product(vec![PriorSpec::normal1(0.0, 100.0)?, PriorSpec::normal1(0.0, 6.25)?])?;
    let cauchy = PriorSpec::product(vec![PriorSpec::student_t1(0.0, 100.0, 1.0)?, PriorSpec::student_t1(0.0, 6.25, 1.0)?])?;
    for (name, prior) in [("normal", normal), ("cauchy", cauchy)] {
        let r = conflict_pvalue(&model, &prior, &observed)?;
        println!("{name:>7}: P-value {:.6} via {:?}", r.pvalue, r.method);
    }
    Ok(())
}
