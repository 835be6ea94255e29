//! Fits the pencil-beam constant κ so that four elements at a 15° opening
//! angle over 10 m land on the ladder rung nearest 200 Gbps.
//!
//! `cargo run -p thzlink --example calibrate_element_gain`

use thzlink::arrays::{calibrate_pencil_constant, SubarrayConfig, PENCIL_BEAM_CONSTANT};
use thzlink::channel::AtmosphereState;
use thzlink::spectroscopy::bundled_catalog;

fn main() {
    let cal = calibrate_pencil_constant(
        200.0,
        &SubarrayConfig::default(),
        &AtmosphereState::default(),
        &bundled_catalog(),
    )
    .expect("calibration");
    println!("rung           {}-QAM", cal.order);
    println!("net rate       {:.3} Gbps", cal.net_rate_gbps);
    println!(
        "kappa interval [{:.3}, {:.3})",
        cal.kappa_min, cal.kappa_max
    );
    println!("kappa          {:.1}", cal.kappa);
    println!("committed      {PENCIL_BEAM_CONSTANT:.1}");
}
