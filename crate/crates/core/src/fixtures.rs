//! Bundled example components, addressable by file stem.

use crate::error::Result;
use crate::formats::parse_iots;
use crate::model::Iots;

/// `(name, source text)`, sorted by name.
pub const FIXTURES: &[(&str, &str)] = &[
    ("ex63_recv_a", include_str!("../fixtures/ex63_recv_a.iots")),
    ("ex63_recv_b", include_str!("../fixtures/ex63_recv_b.iots")),
    ("ex63_send_a", include_str!("../fixtures/ex63_send_a.iots")),
    ("ex63_send_b", include_str!("../fixtures/ex63_send_b.iots")),
    ("fig10_a", include_str!("../fixtures/fig10_a.iots")),
    ("fig10_b", include_str!("../fixtures/fig10_b.iots")),
    ("fig11_a", include_str!("../fixtures/fig11_a.iots")),
    ("fig11_b", include_str!("../fixtures/fig11_b.iots")),
    ("fig4_a", include_str!("../fixtures/fig4_a.iots")),
    ("fig4_b", include_str!("../fixtures/fig4_b.iots")),
    ("fig5_a", include_str!("../fixtures/fig5_a.iots")),
    ("fig5_b", include_str!("../fixtures/fig5_b.iots")),
    ("fig7_a", include_str!("../fixtures/fig7_a.iots")),
    ("fig7_b", include_str!("../fixtures/fig7_b.iots")),
    ("ma", include_str!("../fixtures/ma.iots")),
    ("maker", include_str!("../fixtures/maker.iots")),
    ("mb", include_str!("../fixtures/mb.iots")),
    ("mb_prime", include_str!("../fixtures/mb_prime.iots")),
    ("user", include_str!("../fixtures/user.iots")),
];

pub fn source(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a bundled fixture. Panics on an unknown name.
pub fn load(name: &str) -> Result<Iots> {
    let text = source(name).unwrap_or_else(|| panic!("no fixture named `{name}`"));
    parse_iots(text)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    FIXTURES.iter().map(|(n, _)| *n)
}

/// Pairs exercised by the regression suite.
pub const PAIRS: &[(&str, &str)] = &[
    ("maker", "user"),
    ("ma", "mb"),
    ("ma", "mb_prime"),
    ("fig4_a", "fig4_b"),
    ("fig5_a", "fig5_b"),
    ("fig7_a", "fig7_b"),
    ("ex63_recv_a", "ex63_recv_b"),
    ("ex63_send_a", "ex63_send_b"),
    ("fig10_a", "fig10_b"),
    ("fig11_a", "fig11_b"),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_parse() {
        for n in names() {
            load(n).unwrap_or_else(|e| panic!("{n}: {e}"));
        }
    }
}
