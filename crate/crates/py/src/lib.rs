use pyo3::prelude::*;

#[pymodule]
fn qflag_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
