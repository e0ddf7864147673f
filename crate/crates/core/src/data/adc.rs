//! ADC unit conversion for the five-channel acquisition board.

use crate::error::{Error, Result};
use crate::fis::SensorSample;

/// Highest representable ADC count.
pub const ADC_MAX: u16 = 1023;

/// Volts per ADC unit (10-bit reads over a 0-5 V range).
pub const VOLTS_PER_UNIT: f64 = 0.0049;

/// One raw acquisition frame: five integer ADC counts in `[0, 1023]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawAdcReading {
    channels: [u16; 5],
}

impl RawAdcReading {
    pub fn new(channels: [u16; 5]) -> Result<Self> {
        if let Some(bad) = channels.iter().find(|&&v| v > ADC_MAX) {
            return Err(Error::invalid_argument(format!(
                "ADC value {bad} exceeds the maximum of {ADC_MAX}"
            )));
        }
        Ok(RawAdcReading { channels })
    }

    pub fn channels(&self) -> [u16; 5] {
        self.channels
    }
}

/// Converts a raw frame to volts at [`VOLTS_PER_UNIT`] per count.
pub fn adc_to_volts(raw: &RawAdcReading) -> SensorSample {
    let volts = raw
        .channels
        .iter()
        .map(|&v| f64::from(v) * VOLTS_PER_UNIT)
        .collect();
    SensorSample::new(volts).expect("ADC counts convert to finite voltages")
}
