//! Space-time diagrams as binary PGM and PPM images.

use crate::error::{Error, Result};
use crate::rule::OrbitTrace;
use crate::symbolic::Alphabet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Ppm,
}

impl std::str::FromStr for ImageFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pgm" => Ok(ImageFormat::Pgm),
            "ppm" => Ok(ImageFormat::Ppm),
            other => Err(Error::Precondition(format!("unknown image format `{other}`"))),
        }
    }
}

/// Colors indexed by symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Palette {
    Gray(Vec<u8>),
    Rgb(Vec<[u8; 3]>),
}

impl Palette {
    /// `gray_i = floor(255·i / (|A| - 1))`, all black for a single symbol.
    pub fn default_for(alphabet: &Alphabet) -> Self {
        let q = alphabet.len();
        let grays = (0..q)
            .map(|i| if q == 1 { 0 } else { (255 * i / (q - 1)) as u8 })
            .collect();
        Palette::Gray(grays)
    }

    pub fn len(&self) -> usize {
        match self {
            Palette::Gray(g) => g.len(),
            Palette::Rgb(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn gray(&self, a: u8) -> u8 {
        match self {
            Palette::Gray(g) => g[a as usize],
            Palette::Rgb(c) => {
                let [r, g, b] = c[a as usize];
                ((299 * r as u32 + 587 * g as u32 + 114 * b as u32) / 1000) as u8
            }
        }
    }

    fn rgb(&self, a: u8) -> [u8; 3] {
        match self {
            Palette::Gray(g) => [g[a as usize]; 3],
            Palette::Rgb(c) => c[a as usize],
        }
    }
}

/// Width `2W+1`, height `T+1`, raster row 0 is the latest time.
pub fn render_spacetime(trace: &OrbitTrace, palette: &Palette, format: ImageFormat) -> Result<Vec<u8>> {
    let q = trace.rule.alphabet().len();
    if palette.len() != q {
        return Err(Error::Precondition(format!(
            "palette has {} colors for {q} symbols",
            palette.len()
        )));
    }
    let (w, h) = (trace.width(), trace.rows.len());
    let magic = match format {
        ImageFormat::Pgm => "P5",
        ImageFormat::Ppm => "P6",
    };
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    for row in trace.rows.iter().rev() {
        for &a in row {
            match format {
                ImageFormat::Pgm => out.push(palette.gray(a)),
                ImageFormat::Ppm => out.extend_from_slice(&palette.rgb(a)),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::rule::{directional_orbit, LocalRule};
    use crate::symbolic::PeriodicConfig;

    fn min_trace(steps: u64) -> OrbitTrace {
        let a = Alphabet::from_chars("01").unwrap();
        let min = LocalRule::from_fn(a.clone(), 0, 1, 16, |w| w[0].min(w[1])).unwrap();
        let x = PeriodicConfig::new(a, vec![0, 1, 1, 1], 0).unwrap();
        directional_orbit(&min, &Curve::slope(0, 1), &x, steps, 1).unwrap()
    }

    #[test]
    fn min_top_row_is_black() {
        let trace = min_trace(3);
        let bytes = render_spacetime(&trace, &Palette::default_for(trace.rule.alphabet()), ImageFormat::Pgm).unwrap();
        let header = b"P5\n3 4\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 12);
        assert_eq!(&bytes[header.len()..header.len() + 3], &[0, 0, 0]);
        // Bottom row is time 0: cells -1, 0, 1 of ∞(0111)∞ are 1, 0, 1.
        assert_eq!(&bytes[header.len() + 9..], &[255, 0, 255]);
    }

    #[test]
    fn time_zero_and_ppm_sizes() {
        let trace = min_trace(0);
        let palette = Palette::default_for(trace.rule.alphabet());
        let pgm = render_spacetime(&trace, &palette, ImageFormat::Pgm).unwrap();
        assert_eq!(pgm, b"P5\n3 1\n255\n\xff\x00\xff");
        let ppm = render_spacetime(&trace, &palette, ImageFormat::Ppm).unwrap();
        assert_eq!(ppm.len(), b"P6\n3 1\n255\n".len() + 9);
    }

    #[test]
    fn single_symbol_is_black() {
        let a = Alphabet::from_chars("z").unwrap();
        let id = LocalRule::identity(a.clone());
        let x = PeriodicConfig::monochrome(a.clone(), 0).unwrap();
        let trace = directional_orbit(&id, &Curve::slope(0, 1), &x, 2, 2).unwrap();
        let bytes = render_spacetime(&trace, &Palette::default_for(&a), ImageFormat::Pgm).unwrap();
        assert!(bytes[b"P5\n5 3\n255\n".len()..].iter().all(|&b| b == 0));
    }

    #[test]
    fn gray_steps() {
        let a = Alphabet::from_chars("abc").unwrap();
        assert_eq!(Palette::default_for(&a), Palette::Gray(vec![0, 127, 255]));
    }
}
