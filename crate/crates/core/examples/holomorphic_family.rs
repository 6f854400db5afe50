//! Uniform sector certificate of a holomorphic family and a numerical
//! holomorphy check of its resolvent, with a pole as negative control.

use holoform::demos;
use holoform::holo::{self, perturbation_radius, resolvent_holomorphy_check, verify_proof_chain};
use holoform::linalg::cr;

fn main() -> holoform::Result<()> {
    let scenario = demos::builtin_demo("affine-hermitian")?;
    let family = scenario.family.shifted(scenario.family.normalizing_shift()?);
    let cert = perturbation_radius(&family, 1e-9)?;
    println!(
        "C = {:.4}, C0 = {:.4}, r = {:.4}, certified slope {:.4}",
        cert.c_big, cert.c0, cert.radius, cert.slope_bound
    );

    let chain = verify_proof_chain(&family, &cert, 25, 100, 7, 1e-10, 1e-8)?;
    println!(
        "proof chain holds: {} (worst slope {:.4} <= {:.4})",
        chain.holds, chain.max_slope, chain.slope_bound
    );
    let ratios = holo::norm_equivalence_on_circle(&family, &cert, 25)?;
    let lo = ratios.iter().map(|r| r.1.lower).fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().map(|r| r.1.upper).fold(0.0, f64::max);
    println!("form norms on |z| = r within [{lo:.4}, {hi:.4}] of the z = 0 norm");

    for nodes in [8, 16, 32] {
        let rep = resolvent_holomorphy_check(&family, cr(0.0), cr(0.0), 0.5 * cert.radius, nodes, Default::default())?;
        println!("resolvent mean-value residual with {nodes:>2} nodes: {:.3e}", rep.mean_value_residual);
    }

    let pole = demos::builtin_demo("pole-at-r0")?.family;
    for r in [0.25, 0.5, 0.75, 0.9] {
        let rep = resolvent_holomorphy_check(&pole, cr(0.0), cr(0.0), r, 32, Default::default())?;
        println!("pole at 1, radius {r}: residual {:.3e}, passed {}", rep.mean_value_residual, rep.passed);
    }
    match resolvent_holomorphy_check(&pole, cr(0.0), cr(0.0), 1.0, 32, Default::default()) {
        Err(e) => println!("radius 1: {e}"),
        Ok(rep) => println!("radius 1: residual {:.3e}", rep.mean_value_residual),
    }
    Ok(())
}
