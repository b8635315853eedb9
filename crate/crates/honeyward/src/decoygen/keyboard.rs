//! Physical-adjacency tables for typo generation.
//!
//! Neighbors are same-row plus staggered-row keys, lowercase letters and
//! the digit row only. Case is handled by the caller.

/// Supported physical layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    #[default]
    Qwerty,
    Azerty,
}

impl std::str::FromStr for Layout {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qwerty" => Ok(Layout::Qwerty),
            "azerty" => Ok(Layout::Azerty),
            other => Err(crate::error::Error::Config(format!(
                "unknown keyboard layout '{other}'"
            ))),
        }
    }
}

const QWERTY: &[(char, &str)] = &[
    ('1', "2q"),
    ('2', "13qw"),
    ('3', "24we"),
    ('4', "35er"),
    ('5', "46rt"),
    ('6', "57ty"),
    ('7', "68yu"),
    ('8', "79ui"),
    ('9', "80io"),
    ('0', "9op"),
    ('q', "12wa"),
    ('w', "23qeas"),
    ('e', "34wrsd"),
    ('r', "45etdf"),
    ('t', "56ryfg"),
    ('y', "67tugh"),
    ('u', "78yihj"),
    ('i', "89uojk"),
    ('o', "90ipkl"),
    ('p', "0ol"),
    ('a', "qwsz"),
    ('s', "weadzx"),
    ('d', "ersfxc"),
    ('f', "rtdgcv"),
    ('g', "tyfhvb"),
    ('h', "yugjbn"),
    ('j', "uihknm"),
    ('k', "iojlm"),
    ('l', "opkm"),
    ('z', "asx"),
    ('x', "sdzc"),
    ('c', "dfxv"),
    ('v', "fgcb"),
    ('b', "ghvn"),
    ('n', "hjbm"),
    ('m', "jkln"),
];

const AZERTY: &[(char, &str)] = &[
    ('1', "2a"),
    ('2', "13az"),
    ('3', "24ze"),
    ('4', "35er"),
    ('5', "46rt"),
    ('6', "57ty"),
    ('7', "68yu"),
    ('8', "79ui"),
    ('9', "80io"),
    ('0', "9op"),
    ('a', "12zq"),
    ('z', "23aeqs"),
    ('e', "34zrsd"),
    ('r', "45etdf"),
    ('t', "56ryfg"),
    ('y', "67tugh"),
    ('u', "78yihj"),
    ('i', "89uojk"),
    ('o', "90ipkl"),
    ('p', "0olm"),
    ('q', "azsw"),
    ('s', "zeqdwx"),
    ('d', "ersfxc"),
    ('f', "rtdgcv"),
    ('g', "tyfhvb"),
    ('h', "yugjbn"),
    ('j', "uihkn"),
    ('k', "iojl"),
    ('l', "opkm"),
    ('m', "pl"),
    ('w', "qsx"),
    ('x', "sdwc"),
    ('c', "dfxv"),
    ('v', "fgcb"),
    ('b', "ghvn"),
    ('n', "hjb"),
];

/// Neighbors of a lowercase letter or digit, if the key is in the table.
pub fn adjacent(layout: Layout, key: char) -> Option<&'static str> {
    let table = match layout {
        Layout::Qwerty => QWERTY,
        Layout::Azerty => AZERTY,
    };
    table.iter().find(|(c, _)| *c == key).map(|(_, n)| *n)
}
