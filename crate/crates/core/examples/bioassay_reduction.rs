//! Reduction in prior-data conflict over intercept and slope scalings for
//! the bioassay, with its 0.5 contour and the best slope scaling.

use priorinfo::conflict::LogisticQuadrature;
use priorinfo::discretescan::{logistic_reduction, logistic_slice, Axis, LogisticFamily, SliceAxis};
use priorinfo::modelprior::{LogisticDesign, PriorSpec};

fn main() -> priorinfo::Result<()> {
    let design = LogisticDesign::bioassay();
    let base = PriorSpec::product(vec![PriorSpec::normal1(0.0, 100.0)?, PriorSpec::normal1(0.0, 6.25)?])?;
    let family: LogisticFamily = "normal-normal".parse()?;
    let quad = LogisticQuadrature::default();
    let s0 = Axis::new("sigma0", 0.5, 8.0, 6)?;
    let s1 = Axis::new("sigma1", 0.5, 8.0, 6)?;
    let field = logistic_reduction(&design, &base, family, 0.05, &s0, &s1, &quad)?;
    println!("x_gamma = {:.6}", field.x_gamma);
    for (j, b) in s1.values().iter().enumerate() {
        let row: Vec<String> = (0..s0.steps).map(|i| format!("{:7.3}", field.value(i, j))).collect();
        println!("sigma1 {b:5.2}: {}", row.join(" "));
    }
    println!("0.5 contour: {} polyline(s)", field.contours(&[0.5]).len());
    let slice = logistic_slice(&design, &base, family, 0.05, SliceAxis::FixSigma0, 2.5, &Axis::new("sigma1", 1.25, 3.75, 11)?, &quad)?;
    println!("best sigma1 at sigma0 = 2.5: {:.4} (reduction {:.4})", slice.plateau_center, slice.raw_max);
    Ok(())
}
