//! Holomorphy in z of T_z(t) = exp(-t A_z), for real and complex time.

use holoform::demos;
use holoform::holo::perturbation_radius;
use holoform::linalg::CVec;
use holoform::semigroup::{sector_semigroup_check, semigroup_holomorphy_check, HolomorphyParams, SectorParams};

fn main() -> holoform::Result<()> {
    let scenario = demos::builtin_demo("jordan-nonnormal")?;
    let family = scenario.family.shifted(scenario.family.normalizing_shift()?);
    let cert = perturbation_radius(&family, 1e-9)?;
    let x = CVec::from_element(family.dim(), 1.0.into());

    for nodes in [8, 16, 32] {
        let p = HolomorphyParams {
            node_count: nodes,
            ..HolomorphyParams::new(0.5 * cert.radius, 1.0)
        };
        let (strong, uniform) = semigroup_holomorphy_check(&family, &cert, &x, &p)?;
        println!(
            "{nodes:>2} nodes: T_z(.)x residual {:.3e}, T_z(t) residual {:.3e}, iterate residual {:.3e}",
            strong.mean_value_residual,
            uniform.mean_value_residual,
            uniform.iterate_residual.unwrap_or(0.0)
        );
    }

    let theta = cert.semigroup_angle();
    let rep = sector_semigroup_check(&family, &cert, &SectorParams::new(0.5 * cert.radius, theta, 1.0))?;
    println!(
        "complex time, |arg tau| <= {:.4}: residual {:.3e}, largest |T| {:.4}",
        theta,
        rep.holomorphy.mean_value_residual,
        rep.holomorphy.node_condition.iter().copied().fold(0.0, f64::max)
    );

    let rotated = demos::builtin_demo("rotated-sector")?;
    let fam = rotated.family.shifted(rotated.family.normalizing_shift()?);
    let cert = perturbation_radius(&fam, 1e-9)?;
    let wide = rotated.semigroup.theta_prime.expect("demo sets theta'");
    match sector_semigroup_check(&fam, &cert, &SectorParams::new(0.5 * cert.radius, wide, 1.0)) {
        Err(e) => println!("rotated sector, theta' = {wide:.4}: {e}"),
        Ok(_) => println!("rotated sector, theta' = {wide:.4}: no violation"),
    }
    Ok(())
}
