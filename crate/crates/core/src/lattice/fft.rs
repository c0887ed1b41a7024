use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::linalg::C64;

/// In-place d-dimensional DFT of an interleaved field (`s` components per
/// site), applied independently to every component. The forward transform
/// is `ψ̂(κ) = Σₓ e^{−iκ·x} ψ(x)`; the inverse includes the `1/N` factor.
pub(crate) fn fft_nd(data: &mut [C64], shape: &[usize], s: usize, inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    for axis in 0..shape.len() {
        let len = shape[axis];
        if len == 1 {
            continue;
        }
        let inner: usize = s * shape[axis + 1..].iter().product::<usize>();
        let outer: usize = shape[..axis].iter().product();
        let lines = outer * inner;
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };

        let mut buf = vec![C64::new(0.0, 0.0); lines * len];
        buf.par_chunks_mut(len).enumerate().for_each(|(line, out)| {
            let base = (line / inner) * len * inner + line % inner;
            for (j, o) in out.iter_mut().enumerate() {
                *o = data[base + j * inner];
            }
        });
        let batch = len * 64;
        buf.par_chunks_mut(batch).for_each(|chunk| fft.process(chunk));
        for (line, src) in buf.chunks(len).enumerate() {
            let base = (line / inner) * len * inner + line % inner;
            for (j, v) in src.iter().enumerate() {
                data[base + j * inner] = *v;
            }
        }
    }
    if inverse {
        let n: usize = shape.iter().product();
        let scale = 1.0 / n as f64;
        data.par_iter_mut().for_each(|z| *z *= scale);
    }
}
