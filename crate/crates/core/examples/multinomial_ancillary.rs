//! Conflict checks for the shifted multinomial conditional on each maximal
//! ancillary, and a small region scan.

use priorinfo::conflict::ancillary_conflict;
use priorinfo::discretescan::{multinomial_ancillary_scan, Axis, CellClass};
use priorinfo::modelprior::{Ancillary, PriorSpec, SamplingModel, SufficientStat};

fn main() -> priorinfo::Result<()> {
    let model = SamplingModel::ShiftedMultinomial { n: 18 };
    let counts = vec![4, 6, 4, 4];
    let base = PriorSpec::beta_symmetric(20.0, 20.0)?;
    let r = ancillary_conflict(&model, &base, &SufficientStat::Counts(counts.clone()))?;
    println!("P-value given U1: {:.6}", r.u1.pvalue);
    println!("P-value given U2: {:.6}", r.u2.pvalue);
    let (u1, u2) = (Ancillary::U1.value(&counts), Ancillary::U2.value(&counts));
    let axis = |name| Axis::new(name, 1.0, 40.0, 8);
    let scan = multinomial_ancillary_scan(18, u1, u2, &base, 0.05, &axis("alpha")?, &axis("beta")?, 3)?;
    let wi = scan.cells.iter().filter(|c| c.class.is_wi()).count();
    println!("{wi} of {} cells weakly informative, {} uniformly", scan.cells.len(), scan.count(CellClass::UniformlyWi));
    Ok(())
}
