//! Quick numerical probe of extreme parameter regimes.

use glzeta::model::{normalizing_constant, GLParams, Method};
use glzeta::special::{phi_star, phi_star_integral, QuadratureConfig, ZetaArgs};

fn main() {
    let p = GLParams::new(1.0, 1.0, 8.7827e4, 1.0, 1.0, 4.1739e-38).unwrap();
    let s = normalizing_constant(&p, 1, Method::Series).unwrap();
    let q = normalizing_constant(&p, 1, Method::Quadrature).unwrap();
    println!(
        "C1 series {s:.12e} quadrature {q:.12e} rel {:.2e}",
        ((s - q) / q).abs()
    );

    let p2 = GLParams::new(1.0, 1.0, 5.0e3, 1.0, 1.0, 0.75).unwrap();
    let s2 = normalizing_constant(&p2, 2, Method::Series).unwrap();
    let q2 = normalizing_constant(&p2, 2, Method::Quadrature).unwrap();
    println!(
        "C2 series {s2:.12e} quadrature {q2:.12e} rel {:.2e}",
        ((s2 - q2) / q2).abs()
    );

    let cfg = QuadratureConfig::default();
    let args = ZetaArgs::new(-1.0, 0.5, 2.0e-4, 1.5).unwrap();
    let a = phi_star(&args).unwrap();
    let b = phi_star_integral(&args, &cfg).unwrap();
    println!(
        "phi tiny-a series {a:.12e} integral {b:.12e} rel {:.2e}",
        ((a - b) / b).abs()
    );
}
