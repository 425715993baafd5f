//! First Neumann mode of geodesic balls by shooting, and the extended fold weight.
use neumann_sphere::radial::{extend_profile, solve_ball_mode};
use neumann_sphere::sphere::radius_from_area;

fn main() -> neumann_sphere::Result<()> {
    for n in [2, 3, 4] {
        let m = solve_ball_mode(n, std::f64::consts::FRAC_PI_2)?;
        println!("hemisphere of S^{n}: mu_1 = {:.10}", m.mu);
    }
    let r = radius_from_area(6.0, 2)?;
    let p = extend_profile(solve_ball_mode(2, r)?)?;
    p.check_monotonicity(1e-10)?;
    println!("B^6: r = {r:.6}, mu_1 = {:.6}, g(1) = {:.6}, g(-1) = {:.6}", p.mu(), p.g(1.0), p.g(-1.0));
    Ok(())
}
