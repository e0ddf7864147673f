//! Live-capture line protocol: ASCII lines of five comma-separated ADC
//! integers. Malformed lines yield per-line errors without ending the stream.

use std::io::BufRead;

use super::adc::RawAdcReading;
use crate::error::{Error, Result};

/// Parses a line source into a sequence of readings and per-line errors.
///
/// Each yielded error carries the 1-based line number and the offending line
/// verbatim; the iterator keeps going afterwards. An I/O error from the
/// underlying reader ends the stream after being reported.
pub fn read_stream(reader: impl BufRead) -> impl Iterator<Item = Result<RawAdcReading>> {
    let mut lines = reader.lines().enumerate();
    let mut io_failed = false;
    std::iter::from_fn(move || {
        if io_failed {
            return None;
        }
        let (index, line) = match lines.next() {
            Some((index, Ok(line))) => (index, line),
            Some((_, Err(e))) => {
                io_failed = true;
                return Some(Err(Error::Io(e)));
            }
            None => return None,
        };
        Some(parse_line(index + 1, &line))
    })
}

fn parse_line(line_no: usize, line: &str) -> Result<RawAdcReading> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 5 {
        return Err(Error::parse(
            line_no,
            format!("expected 5 comma-separated integers, got `{line}`"),
        ));
    }
    let mut channels = [0u16; 5];
    for (slot, field) in channels.iter_mut().zip(&fields) {
        *slot = field
            .parse()
            .map_err(|_| Error::parse(line_no, format!("`{field}` is not an ADC integer in `{line}`")))?;
    }
    RawAdcReading::new(channels).map_err(|e| Error::parse(line_no, format!("{e} in `{line}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_valid_lines() {
        let input = "512,512,512,512,512\n0,1,2,3,4\n";
        let readings: Vec<_> = read_stream(input.as_bytes()).collect();
        assert_eq!(readings.len(), 2);
        assert_eq!(readings[0].as_ref().unwrap().channels(), [512; 5]);
        assert_eq!(readings[1].as_ref().unwrap().channels(), [0, 1, 2, 3, 4]);
    }

    #[test]
    fn wrong_arity_reports_and_continues() {
        let input = "512,512\n1,2,3,4,5\n";
        let items: Vec<_> = read_stream(input.as_bytes()).collect();
        assert_eq!(items.len(), 2);
        let err = items[0].as_ref().unwrap_err();
        assert!(err.to_string().contains("512,512"), "{err}");
        assert!(items[1].is_ok());
    }

    #[test]
    fn out_of_range_value_reports_and_continues() {
        let input = "1024,0,0,0,0\n1,2,3,4,5\n";
        let items: Vec<_> = read_stream(input.as_bytes()).collect();
        assert!(items[0].is_err());
        assert!(items[1].is_ok());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let input = "1,2,3,4,5\nbogus\n";
        let items: Vec<_> = read_stream(input.as_bytes()).collect();
        match items[1].as_ref().unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(*line, 2);
                assert!(message.contains("bogus"));
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
