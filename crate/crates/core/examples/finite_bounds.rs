//! Bounds on the steering parameter with finitely many measurement axes.
//!
//! Pass JSON files holding lists of 3-vectors to add your own geometries:
//!
//! ```bash
//! cargo run --example finite_bounds -- my_axes.json
//! ```

use std::path::Path;

use tsteer::quadrature::{build_grid, Scheme};
use tsteer::steering::{catalog, finite_bound, infinite_bound, steering_parameter_finite, MeasurementGeometry};
use tsteer::CorrelationMatrix;

fn main() -> tsteer::Result<()> {
    let mut geometries = catalog();
    for arg in std::env::args().skip(1) {
        geometries.push(MeasurementGeometry::load(Path::new(&arg))?);
    }

    // a Werner state with alpha = 0.6 gives parameter 0.6 for every geometry
    let werner = CorrelationMatrix::diagonal(0.6, -0.6, 0.6);
    println!("{:<18} {:>3} {:>12} {:>12}  violated", "geometry", "N", "C_N", "S_N(0.6)");
    for g in &geometries {
        let c = finite_bound(g)?;
        let s = steering_parameter_finite(&werner, g);
        println!("{:<18} {:>3} {c:>12.8} {s:>12.8}  {}", g.name, g.len(), s > c);
    }
    let limit = infinite_bound(&build_grid(Scheme::HemisphereGauss, 32)?);
    println!("{:<18} {:>3} {limit:>12.8}", "limit", "inf");
    Ok(())
}
