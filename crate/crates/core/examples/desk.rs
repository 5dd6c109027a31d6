//! Digital and closed-form hybrid rates for a 28 GHz, 50 m link with 16×16
//! arrays at the optimal spacing for 16 streams.

use losmimo_core::beamforming::{
    asymptotic_hybrid, dictionary_rx, dictionary_tx, digital_svd, hybrid_rate, ColumnSelection, PowerMode,
};
use losmimo_core::{channel, geometry, spectral, ArraySpec, ChannelParams, Side};

fn main() -> losmimo_core::Result<()> {
    let params = ChannelParams::<f64>::from_frequency_ghz(28.0, 50.0)?;
    let sol = geometry::optimal_spacing(16, 16, 4, params.wavelength, params.distance, 1.0)?;
    let spec = ArraySpec::parallel(16, 16, sol.d_t, sol.d_t);
    let tx = geometry::build_layout(&spec, Side::Tx, params.distance)?;
    let rx = geometry::build_layout(&spec, Side::Rx, params.distance)?;
    let h = channel::exact_channel(&tx, &rx, &params)?;

    let digital = digital_svd(&h, 16, PowerMode::Uniform)?;
    let (f, w) = asymptotic_hybrid(
        &dictionary_tx(&tx, &params, 16, 16)?,
        &dictionary_rx(&rx, &params, 16, 16)?,
        &h,
        16,
        ColumnSelection::GainRanked,
    )?;
    println!("spacing      {:.4} m", sol.d_t);
    println!("upper bound  {:.3} b/s/Hz", spectral::rate_upper_bound(256, 256, 16, 1.0));
    println!("digital      {:.3} b/s/Hz", digital.rate(&h, 1.0)?);
    println!("asymptotic   {:.3} b/s/Hz", hybrid_rate(&h, &f, &w, 1.0)?);
    Ok(())
}
