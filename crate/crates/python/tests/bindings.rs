use pyo3::prelude::*;
use pyo3::types::PyComplex;

#[test]
fn module_exposes_working_functions() {
    Python::initialize();
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(pydunkl::pydunkl)(py);
        let m = m.bind(py);
        let e = m.getattr("dunkl_kernel").unwrap().call1((0.5, 0.0)).unwrap();
        let e = e.cast::<PyComplex>().unwrap();
        assert_eq!((e.real(), e.imag()), (1.0, 0.0));

        let (value, kind): (f64, String) = m.getattr("bound_constant").unwrap().call1((1.0, 1.0, 2.0)).unwrap().extract().unwrap();
        assert!((value - 0.5).abs() < 1e-13);
        assert_eq!(kind, "exact_beta");

        let err = m.getattr("constants").unwrap().call1((0.0,)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
