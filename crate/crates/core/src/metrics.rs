use crate::{Frame, Result};

/// Luma PSNR in dB, `10 log10(255² / MSE)`. Identical frames give `+inf`.
pub fn psnr(reference: &Frame, test: &Frame) -> Result<f64> {
    reference.same_shape(test)?;
    let sse: u64 = reference
        .luma()
        .data()
        .iter()
        .zip(test.luma().data())
        .map(|(&a, &b)| {
            let d = a.abs_diff(b) as u64;
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(f64::INFINITY);
    }
    let n = reference.luma().data().len() as f64;
    Ok(10.0 * libm::log10(255.0 * 255.0 * n / sse as f64))
}
