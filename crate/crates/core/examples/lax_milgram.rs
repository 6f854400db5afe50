//! Solve a coercive variational problem and build the associated operator.

use holoform::hilbert::{DualVector, Embedding, Form, HilbertSpace};
use holoform::laxmilgram::{
    accretivity_margin, associated_operator, coercivity_constant, laxmilgram_inverse_norm, laxmilgram_solve,
};
use holoform::linalg::{c, cr, from_real_rows, CMat, CVec};

fn main() -> holoform::Result<()> {
    // V = C^3 with an H^1-like Gram, H = C^3 with a weighted L^2 Gram.
    let v = HilbertSpace::new(from_real_rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]))?;
    let h = HilbertSpace::new(from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 2.0]]))?;
    let emb = Embedding::new(v.clone(), h, CMat::identity(3, 3))?;

    let mut m = v.gram().clone();
    m[(0, 1)] += c(0.0, 0.4);
    m[(1, 0)] -= c(0.0, 0.4);
    m[(1, 2)] += cr(0.3);
    let form = Form::new(v.clone(), m)?;

    let alpha = coercivity_constant(&form)?.alpha;
    println!("coercivity constant alpha = {alpha:.6}");
    println!("|inverse| = {:.6} <= 1/alpha = {:.6}", laxmilgram_inverse_norm(&form)?, 1.0 / alpha);

    let f = DualVector::new(v, CVec::from_vec(vec![cr(1.0), cr(0.0), c(0.0, -1.0)]))?;
    let u = laxmilgram_solve(&form, &f)?;
    for (k, z) in u.iter().enumerate() {
        println!("u[{k}] = {:.6} {:+.6}i", z.re, z.im);
    }

    let op = associated_operator(&form, &emb)?;
    let c_emb = emb.bound();
    println!(
        "accretivity margin {:.6} >= alpha/c^2 = {:.6}",
        accretivity_margin(&op),
        alpha / (c_emb * c_emb)
    );
    Ok(())
}
