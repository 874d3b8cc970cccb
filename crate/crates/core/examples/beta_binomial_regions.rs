//! Classifies Beta(a, b) priors against Beta(5, 5) for a binomial with
//! n = 20 and prints the region as a character map.

use priorinfo::discretescan::{betabinom_scan, betabinom_symmetric_boundaries, Axis, CellClass};
use priorinfo::modelprior::{PriorSpec, SampleSize};

fn main() -> priorinfo::Result<()> {
    let base = PriorSpec::beta(5.0, 5.0)?;
    let a = Axis::new("alpha", 0.5, 12.0, 24)?;
    let b = Axis::new("beta", 0.5, 12.0, 24)?;
    let scan = betabinom_scan(SampleSize::Finite(20), &base, 0.05, &a, &b, 7)?;
    println!("U uniformly wi, L wi at level only, . not wi (alpha across, beta down)");
    for (j, bv) in b.values().iter().enumerate().rev() {
        let row: String = (0..a.steps)
            .map(|i| match scan.cell(i, j).class {
                CellClass::UniformlyWi => 'U',
                c if c.is_wi() => 'L',
                _ => '.',
            })
            .collect();
        println!("{bv:6.2} {row}");
    }
    println!("uniform cells: {}", scan.count(CellClass::UniformlyWi));
    let s = betabinom_symmetric_boundaries(20, &base, 0.05, 6.0, 20.0, 1e-6)?;
    println!("Beta(a, a) boundaries: uniform {:.4}, level {:.4}", s.uniform, s.level);
    Ok(())
}
