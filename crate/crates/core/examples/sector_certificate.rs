//! Vertex, minimal semi-angle and a numerical-range picture of one form.

use holoform::hilbert::{Embedding, Form, HilbertSpace};
use holoform::linalg::{c, CMat, CVec};
use holoform::sector::{min_semiangle, numerical_range_sample, sector_check, vertex};

fn main() -> holoform::Result<()> {
    let space = HilbertSpace::standard(2);
    let emb = Embedding::identity_on(space.clone());
    let form = Form::new(space, CMat::from_diagonal(&CVec::from_vec(vec![c(2.0, 1.0), c(3.0, -3.0)])))?;

    let (gamma, _) = vertex(&form, &emb)?;
    println!("vertex = {gamma:.6}");
    for g in [0.0, 1.0, 1.9] {
        let est = min_semiangle(&form, &emb, g)?;
        println!(
            "vertex {g:>4}: slope {:.6}, semi-angle {:.2} deg",
            est.slope,
            est.semi_angle().to_degrees()
        );
    }
    let tight = min_semiangle(&form, &emb, 0.0)?.slope;
    println!("sector check at the minimal slope: {:?}", sector_check(&form, &emb, 0.0, tight)?);
    println!("just below it:                     {:?}", sector_check(&form, &emb, 0.0, 0.95 * tight)?);

    let samples = numerical_range_sample(&form, &emb, 5, 1)?;
    for z in samples {
        println!("a(u)/|u|^2 = {:.4} {:+.4}i  |Im|/Re = {:.4}", z.re, z.im, z.im.abs() / z.re);
    }
    Ok(())
}
