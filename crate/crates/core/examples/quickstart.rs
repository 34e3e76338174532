use rydpol_core::inversion::{round_trip, RoundTripOptions};
use rydpol_core::{eigen_spectrum, OpticsPreset, TransitionClass};

fn main() -> Result<(), rydpol_core::Error> {
    let s = eigen_spectrum(TransitionClass::THREE_HALF_PLUS, 0.7, 1e-9)?;
    println!("{} bands, {} distinct", s.eigenvalues.len(), s.distinct_count());

    let optics = [OpticsPreset::Standard, OpticsPreset::RotatedCircular];
    let r = round_trip(TransitionClass::THREE_HALF_PLUS, 2.0, &optics, &RoundTripOptions::eigen())?;
    println!("{:?} {:?}", r.combined.candidates, r.combined.pruned);
    Ok(())
}
