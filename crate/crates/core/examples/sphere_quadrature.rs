//! Product Gauss rule on S^2 and the fold map.
use neumann_sphere::sphere::{cap_area, fold, QuadratureRule, UnitVec};

fn main() -> neumann_sphere::Result<()> {
    let rule = QuadratureRule::product_gauss(&UnitVec::north(2), 32, 64);
    println!("sum of weights = {:.14} (4 pi = {:.14})", rule.total_weight(), 4.0 * std::f64::consts::PI);
    println!("int z^2 = {:.14} (4 pi / 3)", rule.integrate(|v| v[2] * v[2]));
    println!("cap of radius 1: {:.12}", cap_area(1.0, 2)?);
    let a = UnitVec::new(vec![0.0, 0.0, 1.0])?;
    let z = UnitVec::new(vec![0.6, 0.0, 0.8])?;
    println!("F_a(z) = {:?}", fold(&a, &z));
    Ok(())
}
