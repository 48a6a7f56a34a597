//! Round-trips a channel matrix through CSV and checks the real stacking.

use dirmod::channel::{rayleigh, read_csv, stack, write_csv};

fn main() -> dirmod::Result<()> {
    let h = rayleigh(3, 4, 2);
    let mut buf = Vec::new();
    write_csv(&h, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    let back = read_csv(buf.as_slice())?;
    println!("max round-trip error {:.2e}", (&back - &h).camax());

    let st = stack(&h);
    let w = dirmod::CVector::from_fn(4, |i, _| num_complex::Complex64::new(i as f64, 1.0 - i as f64));
    let wt = dirmod::channel::stack_vec(&w);
    let y = &h * &w;
    let err = (&st.h1 * &wt - y.map(|z| z.re)).amax().max((&st.h2 * &wt - y.map(|z| z.im)).amax());
    println!("stacked product error {err:.2e}");
    println!("stacked blocks: H1 {:?}, H2 {:?}", st.h1.shape(), st.h2.shape());
    Ok(())
}
