//! The three sphere rules on a few test integrands, and the adaptive driver.

use tsteer::quadrature::{build_grid, integrate, integrate_adaptive, Scheme, FOUR_PI};

type Integrand = fn(&nalgebra::Vector3<f64>) -> f64;

fn main() -> tsteer::Result<()> {
    let cases: [(&str, Integrand, f64); 3] = [
        ("v_z^2", |v| v.z * v.z, FOUR_PI / 3.0),
        ("|v_z|", |v| v.z.abs(), 2.0 * std::f64::consts::PI),
        ("sqrt(v.diag(1,.25,.04).v)", |v| (v.x * v.x + 0.25 * v.y * v.y + 0.04 * v.z * v.z).sqrt(), f64::NAN),
    ];
    let grids = [(Scheme::ProductGauss, 32), (Scheme::HemisphereGauss, 16), (Scheme::Subdivision, 32)];
    for (name, f, exact) in cases {
        println!("{name}  (exact {exact:.12})");
        for (scheme, order) in grids {
            let g = build_grid(scheme, order)?;
            let r = integrate(&g, f);
            println!(
                "  {:<16} order {order:>3}: {:.12}  err est {:.1e}  nodes {}",
                scheme.to_string(),
                r.value,
                r.estimated_error,
                r.nodes_used
            );
        }
        // the kink of |v_z| on the equator stalls the doubling ladder
        match integrate_adaptive(f, 1e-10) {
            Ok(r) => println!("  adaptive: {:.12} ({} nodes)", r.value, r.nodes_used),
            Err(e) => println!("  adaptive: {e}"),
        }
    }
    Ok(())
}
