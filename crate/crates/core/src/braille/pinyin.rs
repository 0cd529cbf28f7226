//! Mandarin syllable structure: initial, final and tone, with tone-number
//! pinyin parsing (`zhong1`, `lv4`, `yuan2`) and rendering.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

macro_rules! component_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            pub fn from_name(s: &str) -> Option<Self> {
                match s {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

component_enum! {
    /// Syllable onset. `Zero` is the null initial of syllables such as `an` or `yi`.
    Initial {
        Zero => "",
        B => "b", P => "p", M => "m", F => "f",
        D => "d", T => "t", N => "n", L => "l",
        G => "g", K => "k", H => "h",
        J => "j", Q => "q", X => "x",
        Zh => "zh", Ch => "ch", Sh => "sh", R => "r",
        Z => "z", C => "c", S => "s",
    }
}

component_enum! {
    /// Syllable rime, named by its underlying form (`iu` for `you`, `ü` for `yu`/`ju`).
    Final {
        A => "a", O => "o", E => "e", I => "i", U => "u", V => "ü", Er => "er",
        Ai => "ai", Ao => "ao", Ei => "ei", Ou => "ou",
        Ia => "ia", Iao => "iao", Ie => "ie", Iu => "iu",
        Ua => "ua", Uo => "uo", Uai => "uai", Ui => "ui", Ve => "üe",
        An => "an", En => "en", In => "in", Un => "un", Vn => "ün",
        Ang => "ang", Eng => "eng", Ing => "ing", Ong => "ong",
        Ian => "ian", Iang => "iang", Iong => "iong",
        Uan => "uan", Uang => "uang", Van => "üan", Ueng => "ueng",
    }
}

impl Initial {
    /// Scheme-table key; the zero initial has no key because it has no cell.
    pub fn key(self) -> Option<&'static str> {
        (self != Initial::Zero).then(|| self.name())
    }

    fn is_palatal(self) -> bool {
        matches!(self, Initial::J | Initial::Q | Initial::X)
    }
}

impl Final {
    /// Parses a scheme-table key; `v` is accepted for `ü`.
    pub fn from_key(s: &str) -> Option<Self> {
        Final::from_name(&s.replace('v', "ü"))
    }

    fn medial(self) -> Medial {
        use Final::*;
        match self {
            I | In | Ing | Ia | Ie | Iao | Iu | Ian | Iang | Iong => Medial::I,
            U | Ua | Uo | Uai | Ui | Uan | Un | Uang | Ueng => Medial::U,
            V | Ve | Van | Vn => Medial::V,
            _ => Medial::None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Medial {
    None,
    I,
    U,
    V,
}

/// Lexical tone: 1 to 4, or 5 for the neutral tone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tone(u8);

impl Tone {
    pub const NEUTRAL: Tone = Tone(5);
    pub const ALL: [Tone; 5] = [Tone(1), Tone(2), Tone(3), Tone(4), Tone(5)];
    /// Tones that have a braille cell.
    pub const MARKED: [Tone; 4] = [Tone(1), Tone(2), Tone(3), Tone(4)];

    pub fn new(n: u8) -> Option<Tone> {
        (1..=5).contains(&n).then_some(Tone(n))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn is_neutral(self) -> bool {
        self.0 == 5
    }
}

impl fmt::Display for Tone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A toneless syllable: the unit an untoned braille syllable pins down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SyllableBase {
    pub initial: Initial,
    pub rime: Final,
}

impl SyllableBase {
    pub fn new(initial: Initial, rime: Final) -> Self {
        SyllableBase { initial, rime }
    }

    pub fn with_tone(self, tone: Tone) -> PinyinSyllable {
        PinyinSyllable {
            initial: self.initial,
            rime: self.rime,
            tone,
        }
    }

    /// Standard pinyin spelling without tone (`yi`, `ju`, `lü`, `wen`).
    pub fn spelling(self) -> String {
        use Final::*;
        if self.initial == Initial::Zero {
            let s = match self.rime {
                I => "yi",
                In => "yin",
                Ing => "ying",
                Ia => "ya",
                Ie => "ye",
                Iao => "yao",
                Iu => "you",
                Ian => "yan",
                Iang => "yang",
                Iong => "yong",
                U => "wu",
                Ua => "wa",
                Uo => "wo",
                Uai => "wai",
                Ui => "wei",
                Uan => "wan",
                Un => "wen",
                Uang => "wang",
                Ueng => "weng",
                V => "yu",
                Ve => "yue",
                Van => "yuan",
                Vn => "yun",
                other => other.name(),
            };
            return s.to_owned();
        }
        let rime = if self.initial.is_palatal() {
            match self.rime {
                V => "u",
                Ve => "ue",
                Van => "uan",
                Vn => "un",
                other => other.name(),
            }
        } else {
            self.rime.name()
        };
        format!("{}{}", self.initial.name(), rime)
    }

    /// Parses a toneless spelling such as `zhong`, `yue`, `lv` or `nüe`.
    pub fn parse(spelling: &str) -> Result<Self> {
        let bad = || Error::InvalidPinyin(spelling.to_owned());
        let body = spelling.to_ascii_lowercase().replace('v', "ü");
        if body.is_empty() {
            return Err(bad());
        }

        let initial = Initial::ALL
            .iter()
            .copied()
            .filter(|i| *i != Initial::Zero && body.starts_with(i.name()) && body.len() > i.name().len())
            .max_by_key(|i| i.name().len());

        let Some(initial) = initial else {
            let rime = zero_initial_rime(&body).ok_or_else(bad)?;
            return Ok(SyllableBase::new(Initial::Zero, rime));
        };

        let rest = &body[initial.name().len()..];
        let rime = if initial.is_palatal() {
            let rime = match rest {
                "u" => Final::V,
                "ue" => Final::Ve,
                "uan" => Final::Van,
                "un" => Final::Vn,
                other => Final::from_name(other).ok_or_else(bad)?,
            };
            if !matches!(rime.medial(), Medial::I | Medial::V) {
                return Err(bad());
            }
            rime
        } else {
            let rime = match (initial, rest) {
                (Initial::N | Initial::L, "ue") => Final::Ve,
                _ => Final::from_name(rest).ok_or_else(bad)?,
            };
            let lateral = matches!(initial, Initial::N | Initial::L);
            let ok = match rime.medial() {
                Medial::V => lateral && matches!(rime, Final::V | Final::Ve),
                _ => rime != Final::Ueng,
            };
            if !ok {
                return Err(bad());
            }
            rime
        };
        Ok(SyllableBase::new(initial, rime))
    }
}

fn zero_initial_rime(body: &str) -> Option<Final> {
    use Final::*;
    let rime = match body {
        "yi" => I,
        "yin" => In,
        "ying" => Ing,
        "ya" => Ia,
        "ye" => Ie,
        "yao" => Iao,
        "you" => Iu,
        "yan" => Ian,
        "yang" => Iang,
        "yong" => Iong,
        "yu" | "yü" => V,
        "yue" | "yüe" => Ve,
        "yuan" | "yüan" => Van,
        "yun" | "yün" => Vn,
        "wu" => U,
        "wa" => Ua,
        "wo" => Uo,
        "wai" => Uai,
        "wei" => Ui,
        "wan" => Uan,
        "wen" => Un,
        "wang" => Uang,
        "weng" => Ueng,
        other => {
            let rime = Final::from_name(other)?;
            return (rime.medial() == Medial::None).then_some(rime);
        }
    };
    Some(rime)
}

impl fmt::Display for SyllableBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spelling())
    }
}

/// One character's pronunciation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PinyinSyllable {
    pub initial: Initial,
    pub rime: Final,
    pub tone: Tone,
}

impl PinyinSyllable {
    pub fn new(initial: Initial, rime: Final, tone: Tone) -> Self {
        PinyinSyllable { initial, rime, tone }
    }

    pub fn base(self) -> SyllableBase {
        SyllableBase::new(self.initial, self.rime)
    }
}

impl FromStr for PinyinSyllable {
    type Err = Error;

    /// Tone-number notation: spelling followed by a digit 1-5.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPinyin(s.to_owned());
        let mut chars = s.chars();
        let digit = chars.next_back().ok_or_else(bad)?;
        let tone = digit
            .to_digit(10)
            .and_then(|d| Tone::new(d as u8))
            .ok_or_else(bad)?;
        let base = SyllableBase::parse(chars.as_str()).map_err(|_| bad())?;
        Ok(base.with_tone(tone))
    }
}

impl fmt::Display for PinyinSyllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.base(), self.tone)
    }
}

/// The set of (initial, final) pairs a lexicon actually uses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SyllableInventory(BTreeSet<SyllableBase>);

impl SyllableInventory {
    /// Every base permitted by pinyin spelling rules, attested or not.
    pub fn structural() -> Self {
        Initial::ALL
            .iter()
            .flat_map(|&i| Final::ALL.iter().map(move |&r| SyllableBase::new(i, r)))
            .filter(|b| SyllableBase::parse(&b.spelling()).ok() == Some(*b))
            .collect()
    }

    pub fn contains(&self, base: &SyllableBase) -> bool {
        self.0.contains(base)
    }

    pub fn insert(&mut self, base: SyllableBase) -> bool {
        self.0.insert(base)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = SyllableBase> + '_ {
        self.0.iter().copied()
    }

    /// Every toned syllable over the inventory.
    pub fn syllables(&self) -> impl Iterator<Item = PinyinSyllable> + '_ {
        self.iter().flat_map(|b| Tone::ALL.into_iter().map(move |t| b.with_tone(t)))
    }
}

impl FromIterator<SyllableBase> for SyllableInventory {
    fn from_iter<T: IntoIterator<Item = SyllableBase>>(iter: T) -> Self {
        SyllableInventory(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syl(s: &str) -> PinyinSyllable {
        s.parse().unwrap()
    }

    #[test]
    fn parses_common_spellings() {
        assert_eq!(syl("zhong1"), PinyinSyllable::new(Initial::Zh, Final::Ong, Tone(1)));
        assert_eq!(syl("yi1"), PinyinSyllable::new(Initial::Zero, Final::I, Tone(1)));
        assert_eq!(syl("ju3").rime, Final::V);
        assert_eq!(syl("xuan2").rime, Final::Van);
        assert_eq!(syl("lv4"), PinyinSyllable::new(Initial::L, Final::V, Tone(4)));
        assert_eq!(syl("lü4"), syl("lv4"));
        assert_eq!(syl("nve4").rime, Final::Ve);
        assert_eq!(syl("lue4").rime, Final::Ve);
        assert_eq!(syl("you3").rime, Final::Iu);
        assert_eq!(syl("wen2").rime, Final::Un);
        assert_eq!(syl("weng1").rime, Final::Ueng);
        assert_eq!(syl("er2"), PinyinSyllable::new(Initial::Zero, Final::Er, Tone(2)));
        assert_eq!(syl("de5").tone, Tone::NEUTRAL);
        assert_eq!(syl("shi4"), PinyinSyllable::new(Initial::Sh, Final::I, Tone(4)));
        assert_eq!(syl("an4").initial, Initial::Zero);
    }

    #[test]
    fn rejects_ill_formed() {
        for s in ["", "zhong", "zhong6", "zhong0", "ja1", "ia1", "bü1", "xong1", "beng", "m2", "n2", "hng1", "yo1", "bueng1", "1"] {
            assert!(s.parse::<PinyinSyllable>().is_err(), "{s} should not parse");
        }
    }

    #[test]
    fn spelling_roundtrip_over_all_structural_bases() {
        let inventory = SyllableInventory::structural();
        assert!(inventory.len() > 300, "only {} bases survive the spelling rules", inventory.len());
        let mut seen = std::collections::HashSet::new();
        for base in inventory.iter() {
            let spelled = base.spelling();
            assert_eq!(SyllableBase::parse(&spelled).unwrap(), base, "{spelled}");
            assert!(seen.insert(spelled));
        }
        for s in inventory.syllables().take(200) {
            assert_eq!(s.to_string().parse::<PinyinSyllable>().unwrap(), s);
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(syl("lv4").to_string(), "lü4");
        assert_eq!(syl("qu4").to_string(), "qu4");
        assert_eq!(syl("yuan2").to_string(), "yuan2");
        assert_eq!(Final::from_key("ve"), Some(Final::Ve));
        assert_eq!(Initial::Zero.key(), None);
    }
}
