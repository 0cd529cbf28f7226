use std::fmt;

use crate::error::{Error, Result};

const BRAILLE_BASE: u32 = 0x2800;

/// A six-dot braille pattern. Dot `k` is present iff bit `k - 1` is set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BrailleCell(u8);

impl BrailleCell {
    pub const BLANK: BrailleCell = BrailleCell(0);

    pub fn from_bits(bits: u8) -> Option<Self> {
        (bits < 64).then_some(BrailleCell(bits))
    }

    /// Builds a cell from dot numbers (1 through 6). Repeated dots are allowed.
    pub fn from_dots<I: IntoIterator<Item = u8>>(dots: I) -> Result<Self> {
        let mut bits = 0u8;
        for dot in dots {
            if !(1..=6).contains(&dot) {
                return Err(Error::InvalidDot(dot));
            }
            bits |= 1 << (dot - 1);
        }
        Ok(BrailleCell(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn has_dot(self, dot: u8) -> bool {
        (1..=6).contains(&dot) && self.0 & (1 << (dot - 1)) != 0
    }

    pub fn dots(self) -> impl Iterator<Item = u8> {
        (1..=6).filter(move |&d| self.has_dot(d))
    }

    pub fn to_char(self) -> char {
        // Always within U+2800..=U+283F.
        char::from_u32(BRAILLE_BASE + u32::from(self.0)).unwrap()
    }

    pub fn from_char(ch: char) -> Result<Self> {
        let cp = ch as u32;
        if (BRAILLE_BASE..BRAILLE_BASE + 64).contains(&cp) {
            Ok(BrailleCell((cp - BRAILLE_BASE) as u8))
        } else {
            Err(Error::NotBraille(ch))
        }
    }

    /// All 64 patterns in bit order.
    pub fn all() -> impl Iterator<Item = BrailleCell> {
        (0..64).map(BrailleCell)
    }
}

impl fmt::Display for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

impl fmt::Debug for BrailleCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BrailleCell({} dots ", self.to_char())?;
        if self.0 == 0 {
            f.write_str("-")?;
        }
        for d in self.dots() {
            write!(f, "{d}")?;
        }
        f.write_str(")")
    }
}

impl TryFrom<char> for BrailleCell {
    type Error = Error;

    fn try_from(ch: char) -> Result<Self> {
        BrailleCell::from_char(ch)
    }
}

impl From<BrailleCell> for char {
    fn from(cell: BrailleCell) -> char {
        cell.to_char()
    }
}

pub fn is_braille_char(ch: char) -> bool {
    BrailleCell::from_char(ch).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_examples() {
        let empty = BrailleCell::from_dots([]).unwrap();
        assert_eq!(empty.bits(), 0);
        assert_eq!(empty.to_char(), '\u{2800}');

        let one = BrailleCell::from_dots([1]).unwrap();
        assert_eq!(one.bits(), 1);
        assert_eq!(one.to_char(), '\u{2801}');

        let full = BrailleCell::from_dots([1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(full.bits(), 63);
        assert_eq!(full.to_char(), '\u{283F}');
    }

    #[test]
    fn rejects_bad_dots() {
        assert!(matches!(BrailleCell::from_dots([0]), Err(Error::InvalidDot(0))));
        assert!(matches!(BrailleCell::from_dots([1, 7]), Err(Error::InvalidDot(7))));
    }

    #[test]
    fn char_conversions() {
        assert_eq!(BrailleCell::BLANK.to_char(), '⠀');
        assert_eq!(BrailleCell::from_char('⠿').unwrap().bits(), 63);
        assert!(matches!(BrailleCell::from_char('a'), Err(Error::NotBraille('a'))));
        assert!(BrailleCell::from_char('\u{2840}').is_err());
        for cell in BrailleCell::all() {
            assert_eq!(BrailleCell::from_char(cell.to_char()).unwrap(), cell);
        }
    }

    #[test]
    fn dots_roundtrip() {
        for cell in BrailleCell::all() {
            assert_eq!(BrailleCell::from_dots(cell.dots()).unwrap(), cell);
        }
        let c = BrailleCell::from_dots([2, 3]).unwrap();
        assert_eq!(c.to_char(), '⠆');
        assert_eq!(format!("{c:?}"), "BrailleCell(⠆ dots 23)");
    }
}
