//! CSV tables of kernels and fields for inspection and plotting.

use num_complex::Complex64;

use super::report::fmt17;
use super::sweep::FieldSpec;
use crate::dunkl::{dunkl_kernel_integral, dunkl_kernel_series, WeightedLine};
use crate::error::{Error, Result};
use crate::hardy::FieldGrid;
use crate::poisson::PoissonKernelPoint;
use crate::quadrature::QuadratureSpec;
use crate::translation::w_kernel;

/// `lo:hi:n`, `n >= 2` points including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::Config(format!("grid '{s}' is not lo:hi:n"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 || !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(bad());
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// `E_λ(iz)` by its series, with the gap to the integral representation.
pub fn kernel_table(lambda: f64, zs: &[f64], spec: &QuadratureSpec) -> Result<String> {
    let line = WeightedLine::new(lambda)?;
    let mut out = String::from("lambda,z_or_xi,re,im,abs_err_vs_alt_representation\n");
    for &z in zs {
        let s = dunkl_kernel_series(&line, Complex64::new(z, 0.0));
        let q = dunkl_kernel_integral(&line, z, spec)?;
        out.push_str(&format!("{},{},{},{},{}\n", fmt17(lambda), fmt17(z), fmt17(s.re), fmt17(s.im), fmt17((s - q).norm())));
    }
    Ok(out)
}

/// The translation kernel `W(x, t, z)` at fixed `x, t`.
pub fn w_table(lambda: f64, x: f64, t: f64, zs: &[f64]) -> Result<String> {
    let line = WeightedLine::new(lambda)?;
    let mut out = String::from("lambda,x,t,z,W\n");
    for &z in zs {
        let w = w_kernel(&line, x, t, z)?;
        out.push_str(&format!("{},{},{},{},{}\n", fmt17(lambda), fmt17(x), fmt17(t), fmt17(z), fmt17(w)));
    }
    Ok(out)
}

/// `u` and `v` of a field on the standard grid.
pub fn field_table(field: &FieldSpec, lambda: f64, spec: &QuadratureSpec) -> Result<String> {
    let line = WeightedLine::new(lambda)?;
    let f = field.build(&line, spec)?;
    let mut out = String::from("x,y,re_u,im_v\n");
    for (x, y) in FieldGrid::standard().points() {
        let v = f.eval(x, y);
        out.push_str(&format!("{},{},{},{}\n", fmt17(x), fmt17(y), fmt17(v.re), fmt17(v.im)));
    }
    Ok(out)
}

/// The Poisson kernels `P_y(x, t)` and `Q_y(x, t)` at fixed `t`, standard grid.
pub fn poisson_table(lambda: f64, t: f64) -> Result<String> {
    let line = WeightedLine::new(lambda)?;
    let mut out = String::from("lambda,x,y,t,P,Q\n");
    for (x, y) in FieldGrid::standard().points() {
        let k = PoissonKernelPoint::new(&line, x, y, t)?;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt17(lambda),
            fmt17(x),
            fmt17(y),
            fmt17(t),
            fmt17(k.value_p),
            fmt17(k.value_q)
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("-1:1:3").unwrap(), vec![-1.0, 0.0, 1.0]);
        for bad in ["", "1:0:3", "0:1:1", "0:1", "a:1:3", "0:1:3:4"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn kernel_table_shape() {
        let t = kernel_table(0.5, &[0.0, 1.0], &QuadratureSpec::default()).unwrap();
        let rows: Vec<&str> = t.lines().collect();
        assert_eq!(rows.len(), 3);
        // E(0) = 1
        assert!(rows[1].contains("1.0000000000000000e0"));
    }
}
