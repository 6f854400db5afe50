//! First-order convergence of (I + (t/n)A)^{-n} to exp(-tA) and the
//! resolvent power bound, both in the H metric.

use holoform::hilbert::HilbertSpace;
use holoform::sampling::Sampler;
use holoform::semigroup::{exponential_formula_convergence, resolvent_power_bound_check, GrowthBound};

fn main() -> holoform::Result<()> {
    let mut rng = Sampler::new(42);
    let h = HilbertSpace::new(rng.pd_matrix(6, 0.5))?;
    // accretive in the H metric: G_H A has positive Hermitian part
    let a = h.gram().clone().lu().solve(&rng.accretive_matrix(6, 0.5, 2.0)).expect("Gram is invertible");

    let table = exponential_formula_convergence(&h, &a, 1.0, 21, &[16, 32, 64, 128, 256], 1e-12)?;
    println!("{:>5} {:>12} {:>12}", "n", "sup error", "ratio");
    let ratios = table.ratios();
    for (k, row) in table.rows.iter().enumerate() {
        let ratio = if k == 0 { String::new() } else { format!("{:.3}", ratios[k - 1]) };
        println!("{:>5} {:>12.4e} {:>12}", row.n, row.sup_error, ratio);
    }

    let rep = resolvent_power_bound_check(&h, &a, GrowthBound::CONTRACTION, &[0.25, 1.0, 4.0], 20, 1e-10)?;
    println!("|(lambda + A)^-n| <= lambda^-n for n <= 20: {} (worst margin {:.3e})", rep.holds, rep.worst_margin);
    Ok(())
}
