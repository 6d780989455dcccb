//! C ABI for `heatgraph`.
//!
//! Graphs and evolved functions are opaque handles created and released by
//! this library. Every fallible call returns an [`HgStatus`]; on failure the
//! message is available from [`hg_last_error_message`] on the same thread.
//! Output pointers are only written on success.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use heatgraph::diagnostics::{completeness_estimate, curvature_scan};
use heatgraph::graph::ball;
use heatgraph::heat::{finite_kernel, kernel_estimate};
use heatgraph::io::{generate, GraphSpec};
use heatgraph::operators::dirichlet_matrix;
use heatgraph::spectral::eigensolve;
use heatgraph::{GraphOracle, HeatError, VertexFunction, VertexId};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Structural = 4,
    Domain = 5,
    NoConvergence = 6,
    ExplorationLimit = 7,
    UnknownVertex = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// A graph loaded from a spec string.
pub struct HgGraph {
    oracle: GraphOracle,
}

/// A finitely supported vertex function, in increasing vertex order.
pub struct HgFunction {
    entries: Vec<(u64, f64)>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &HeatError) -> HgStatus {
    match err {
        HeatError::Structural(_) => HgStatus::Structural,
        HeatError::Domain(_) => HgStatus::Domain,
        HeatError::Contract(_) => HgStatus::InvalidArgument,
        HeatError::NoConvergence { .. } => HgStatus::NoConvergence,
        HeatError::ExplorationLimit { .. } => HgStatus::ExplorationLimit,
        HeatError::UnknownVertex(_) => HgStatus::UnknownVertex,
        HeatError::Parse(_) => HgStatus::Parse,
        HeatError::Io(_) => HgStatus::Io,
    }
}

struct Fail(HgStatus, String);

impl From<HeatError> for Fail {
    fn from(e: HeatError) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(HgStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> HgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            HgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HgStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const HgGraph) -> Result<&'a GraphOracle, Fail> {
    g.as_ref().map(|g| &g.oracle).ok_or_else(|| null("graph"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn hg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a graph from `builtin:<name>[?k=v]` or `file:<path>`.
///
/// # Safety
/// `spec` must be a NUL-terminated string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_graph_from_spec(spec: *const c_char, out: *mut *mut HgGraph) -> HgStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| Fail(HgStatus::Parse, "spec is not UTF-8".into()))?;
        let spec: GraphSpec = spec.parse()?;
        let oracle = generate(&spec)?;
        out.write(Box::into_raw(Box::new(HgGraph { oracle })));
        Ok(())
    })
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `graph` must come from [`hg_graph_from_spec`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hg_graph_free(graph: *mut HgGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_graph_root(graph: *const HgGraph, out: *mut u64) -> HgStatus {
    guard(|| write(out, graph_ref(graph)?.root().0, "out"))
}

/// # Safety
/// `graph` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_graph_valence(graph: *const HgGraph, vertex: u64, out: *mut usize) -> HgStatus {
    guard(|| {
        let m = graph_ref(graph)?.valence(VertexId(vertex))?;
        write(out, m, "out")
    })
}

/// `p(t, x, y)` by exhaustion with balls around the graph root.
///
/// # Safety
/// `graph` must be a live handle; `value` and `converged` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hg_kernel_estimate(
    graph: *const HgGraph,
    t: f64,
    x: u64,
    y: u64,
    tol: f64,
    max_radius: usize,
    value: *mut f64,
    converged: *mut bool,
) -> HgStatus {
    guard(|| {
        if value.is_null() || converged.is_null() {
            return Err(null("output"));
        }
        let est = kernel_estimate(graph_ref(graph)?, t, VertexId(x), VertexId(y), tol, max_radius)?;
        value.write(est.limit);
        converged.write(est.converged);
        Ok(())
    })
}

/// `Σ_y p(t, x, y)` by exhaustion with balls around the graph root.
///
/// # Safety
/// `graph` must be a live handle; `mass` and `converged` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hg_completeness_estimate(
    graph: *const HgGraph,
    t: f64,
    x: u64,
    tol: f64,
    max_radius: usize,
    mass: *mut f64,
    converged: *mut bool,
) -> HgStatus {
    guard(|| {
        if mass.is_null() || converged.is_null() {
            return Err(null("output"));
        }
        let est = completeness_estimate(graph_ref(graph)?, t, VertexId(x), tol, max_radius)?;
        mass.write(est.final_mass);
        converged.write(est.converged);
        Ok(())
    })
}

/// Minimum of `Δd(·, x0)` over the ball of `radius` around `x0`.
///
/// # Safety
/// `graph` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_curvature_min(graph: *const HgGraph, x0: u64, radius: usize, out: *mut i64) -> HgStatus {
    guard(|| {
        let report = curvature_scan(graph_ref(graph)?, VertexId(x0), radius)?;
        write(out, report.min, "out")
    })
}

/// Ascending Dirichlet eigenvalues of the ball of `radius` around `center`.
///
/// `len` always receives the number of eigenvalues. If `capacity` is smaller
/// nothing is copied and the call returns `HG_STATUS_BUFFER_TOO_SMALL`, so
/// passing a null buffer with zero capacity queries the size.
///
/// # Safety
/// `graph` must be a live handle, `len` a valid pointer and `values` valid
/// for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn hg_spectrum(
    graph: *const HgGraph,
    center: u64,
    radius: usize,
    values: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> HgStatus {
    guard(|| {
        if len.is_null() {
            return Err(null("len"));
        }
        let oracle = graph_ref(graph)?;
        let domain = ball(oracle, VertexId(center), radius)?;
        let dec = eigensolve(&dirichlet_matrix(oracle, &domain)?)?;
        let eigenvalues = dec.eigenvalues();
        len.write(eigenvalues.len());
        if capacity < eigenvalues.len() {
            return Err(Fail(
                HgStatus::BufferTooSmall,
                format!("{} eigenvalues do not fit in {capacity}", eigenvalues.len()),
            ));
        }
        if values.is_null() {
            return Err(null("values"));
        }
        std::ptr::copy_nonoverlapping(eigenvalues.as_ptr(), values, eigenvalues.len());
        Ok(())
    })
}

/// Dirichlet evolution of `u0` (given as `len` vertex/value pairs) on the
/// ball of `radius` around the root.
///
/// # Safety
/// `graph` must be a live handle, `vertices` and `values` valid for `len`
/// reads, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_evolve(
    graph: *const HgGraph,
    vertices: *const u64,
    values: *const f64,
    len: usize,
    t: f64,
    radius: usize,
    out: *mut *mut HgFunction,
) -> HgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let oracle = graph_ref(graph)?;
        if len > 0 && (vertices.is_null() || values.is_null()) {
            return Err(null("initial data"));
        }
        let mut u0 = VertexFunction::new();
        if len > 0 {
            let vs = std::slice::from_raw_parts(vertices, len);
            let xs = std::slice::from_raw_parts(values, len);
            for (&v, &x) in vs.iter().zip(xs) {
                u0.add_at(VertexId(v), x);
            }
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Fail(HgStatus::InvalidArgument, format!("time must be nonnegative, got {t}")));
        }
        let domain = ball(oracle, oracle.root(), radius)?;
        let u = if u0.is_empty() {
            u0
        } else {
            finite_kernel(oracle, &domain)?.evolve(&u0, t)?
        };
        let entries = u.iter().map(|(x, v)| (x.0, v)).collect();
        out.write(Box::into_raw(Box::new(HgFunction { entries })));
        Ok(())
    })
}

/// # Safety
/// `f` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hg_function_len(f: *const HgFunction, out: *mut usize) -> HgStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        write(out, f.entries.len(), "out")
    })
}

/// Entry `index` in increasing vertex order.
///
/// # Safety
/// `f` must be a live handle; `vertex` and `value` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn hg_function_get(
    f: *const HgFunction,
    index: usize,
    vertex: *mut u64,
    value: *mut f64,
) -> HgStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(|| null("function"))?;
        if vertex.is_null() || value.is_null() {
            return Err(null("output"));
        }
        let &(x, v) = f.entries.get(index).ok_or_else(|| {
            Fail(HgStatus::InvalidArgument, format!("index {index} out of range for {} entries", f.entries.len()))
        })?;
        vertex.write(x);
        value.write(v);
        Ok(())
    })
}

/// Releases a function. Null is ignored.
///
/// # Safety
/// `f` must come from [`hg_evolve`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hg_function_free(f: *mut HgFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}
