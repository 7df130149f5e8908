use pyo3::prelude::*;

#[pymodule]
fn fmankit_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
