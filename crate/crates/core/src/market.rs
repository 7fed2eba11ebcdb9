//! Market parameters and the cloud-RAN rate model.
//!
//! A VNO holding `B` kHz of spectrum and `m` shared antennas reaches the
//! aggregate rate `B * log2(1 + snr * m)` Kbps. Only the array (power) gain
//! of extra antennas is modelled; multiplexing gains are ignored and every
//! user sees the same constant-power SNR.

use serde::{Deserialize, Serialize};

use crate::error::{MarketError, Result};

/// Global market parameters. Bandwidths are in kHz, prices in currency per kHz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketConfig {
    pub total_antennas: u32,
    pub total_spectrum: u64,
    #[serde(default = "default_snr_linear")]
    pub snr_linear: f64,
    pub num_bidders: usize,
    #[serde(default = "default_spectrum_unit")]
    pub spectrum_unit: u64,
    #[serde(default)]
    pub reserve_spectrum_price: f64,
    pub price_increment: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_snr_linear() -> f64 {
    10.0
}

fn default_spectrum_unit() -> u64 {
    1
}

impl Default for MarketConfig {
    /// 64 antennas, 50 MHz, 20 bidders, 10 dB.
    fn default() -> Self {
        MarketConfig {
            total_antennas: 64,
            total_spectrum: 50_000,
            snr_linear: default_snr_linear(),
            num_bidders: 20,
            spectrum_unit: default_spectrum_unit(),
            reserve_spectrum_price: 0.0,
            price_increment: 0.01,
            rng_seed: 0,
        }
    }
}

impl MarketConfig {
    pub fn validate(&self) -> Result<()> {
        if self.total_antennas == 0 {
            return Err(MarketError::config("total_antennas must be at least 1"));
        }
        if self.total_spectrum == 0 {
            return Err(MarketError::config("total_spectrum must be positive"));
        }
        if !(self.snr_linear.is_finite() && self.snr_linear > 0.0) {
            return Err(MarketError::config("snr_linear must be positive and finite"));
        }
        if self.spectrum_unit == 0 {
            return Err(MarketError::config("spectrum_unit must be positive"));
        }
        if !self.total_spectrum.is_multiple_of(self.spectrum_unit) {
            return Err(MarketError::config(format!(
                "spectrum_unit {} does not divide total_spectrum {}",
                self.spectrum_unit, self.total_spectrum
            )));
        }
        if !(self.price_increment.is_finite() && self.price_increment > 0.0) {
            return Err(MarketError::config(
                "price_increment must be strictly positive and finite",
            ));
        }
        if !(self.reserve_spectrum_price.is_finite() && self.reserve_spectrum_price >= 0.0) {
            return Err(MarketError::config(
                "reserve_spectrum_price must be non-negative and finite",
            ));
        }
        Ok(())
    }

    pub fn rate_model(&self) -> RateModel {
        RateModel {
            snr_linear: self.snr_linear,
        }
    }

    /// Smallest multiple of `spectrum_unit` that carries `r_min` Kbps over `antennas`.
    pub fn required_bandwidth(&self, r_min: f64, antennas: u32) -> Result<u64> {
        self.rate_model()
            .required_bandwidth(r_min, antennas, self.spectrum_unit)
    }
}

/// Rate as a function of bandwidth and antenna count at a fixed linear SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateModel {
    snr_linear: f64,
}

impl RateModel {
    pub fn new(snr_linear: f64) -> Result<Self> {
        if !(snr_linear.is_finite() && snr_linear > 0.0) {
            return Err(MarketError::invalid(format!(
                "snr_linear must be positive, got {snr_linear}"
            )));
        }
        Ok(RateModel { snr_linear })
    }

    pub fn snr_linear(&self) -> f64 {
        self.snr_linear
    }

    /// Bits/s/Hz delivered by `antennas` jointly transmitting.
    pub fn spectral_efficiency(&self, antennas: u32) -> Result<f64> {
        if antennas == 0 {
            return Err(MarketError::invalid("antenna count must be at least 1"));
        }
        Ok((1.0 + self.snr_linear * f64::from(antennas)).log2())
    }

    /// Achievable rate in Kbps for `bandwidth` kHz.
    pub fn rate(&self, bandwidth: f64, antennas: u32) -> Result<f64> {
        if !(bandwidth.is_finite() && bandwidth >= 0.0) {
            return Err(MarketError::invalid(format!(
                "bandwidth must be non-negative, got {bandwidth}"
            )));
        }
        Ok(bandwidth * self.spectral_efficiency(antennas)?)
    }

    /// Exact (unrounded) bandwidth at which the rate equals `r_min`.
    pub fn continuous_bandwidth(&self, r_min: f64, antennas: u32) -> Result<f64> {
        check_rate(r_min)?;
        Ok(r_min / self.spectral_efficiency(antennas)?)
    }

    /// `continuous_bandwidth` rounded up to a multiple of `unit` kHz.
    ///
    /// The result is the smallest multiple whose evaluated rate reaches
    /// `r_min`, so `rate(result) >= r_min` holds in floating point too.
    pub fn required_bandwidth(&self, r_min: f64, antennas: u32, unit: u64) -> Result<u64> {
        check_rate(r_min)?;
        if unit == 0 {
            return Err(MarketError::invalid("spectrum unit must be positive"));
        }
        let efficiency = self.spectral_efficiency(antennas)?;
        let unit_f = unit as f64;
        let carries = |units: u64| (units * unit) as f64 * efficiency >= r_min;

        let mut units = (r_min / efficiency / unit_f).ceil() as u64;
        while !carries(units) {
            units += 1;
        }
        while units > 0 && carries(units - 1) {
            units -= 1;
        }
        Ok(units * unit)
    }
}

fn check_rate(r_min: f64) -> Result<()> {
    if !(r_min.is_finite() && r_min > 0.0) {
        return Err(MarketError::invalid(format!(
            "required rate must be positive, got {r_min}"
        )));
    }
    Ok(())
}
