use super::sampled::SampledForm;
use crate::error::{Error, Result};

/// A named smooth test form.
#[derive(Debug, Clone)]
pub struct SuiteForm {
    pub name: &'static str,
    pub form: SampledForm,
}

fn item<F>(name: &'static str, n: usize, k: usize, f: F) -> SuiteForm
where
    F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
{
    SuiteForm {
        name,
        form: SampledForm::new(n, k, f).expect("suite forms are well formed"),
    }
}

/// Five smooth non-polynomial forms on `ℝ²` or `ℝ³` for the homotopy
/// identity of `T`.
pub fn smooth_suite(n: usize) -> Result<Vec<SuiteForm>> {
    match n {
        2 => Ok(vec![
            item("sin-cos 1-form", 2, 1, |x, o| {
                o[0] = x[0].sin() * x[1].cos();
                o[1] = x[0] * x[1] * x[1];
            }),
            item("exponential 1-form", 2, 1, |x, o| {
                o[0] = 0.0;
                o[1] = (x[0] - x[1]).exp();
            }),
            item("closed 1-form", 2, 1, |x, o| {
                let e = x[0].exp();
                o[0] = e * x[1].sin();
                o[1] = e * x[1].cos();
            }),
            item("cosine area form", 2, 2, |x, o| o[0] = (x[0] * x[1]).cos()),
            item("rational area form", 2, 2, |x, o| o[0] = 1.0 / (1.0 + x[0] * x[0] + x[1] * x[1])),
        ]),
        3 => Ok(vec![
            item("trigonometric 1-form", 3, 1, |x, o| {
                o[0] = x[1].sin();
                o[1] = x[2] * x[0].cos();
                o[2] = (0.5 * x[0] * x[1]).exp();
            }),
            item("closed 1-form", 3, 1, |x, o| {
                let e = x[1].exp();
                o[0] = x[0].cos() * e * x[2];
                o[1] = x[0].sin() * e * x[2];
                o[2] = x[0].sin() * e;
            }),
            item("mixed 2-form", 3, 2, |x, o| {
                o[0] = x[2].cos();
                o[1] = x[0] * x[1];
                o[2] = (x[0] + x[1] + x[2]).sin();
            }),
            item("gaussian 2-form", 3, 2, |x, o| {
                o[0] = (-x[0] * x[0]).exp();
                o[1] = 0.0;
                o[2] = x[1] * x[2] * x[2];
            }),
            item("rational volume form", 3, 3, |x, o| {
                o[0] = 1.0 / (1.0 + x.iter().map(|v| v * v).sum::<f64>());
            }),
        ]),
        _ => Err(Error::Dimension(format!("the smooth suite covers n = 2, 3, not {n}"))),
    }
}
