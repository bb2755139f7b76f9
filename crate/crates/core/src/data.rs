//! Reference data shipped with the crate: the printed automaton table and
//! transfer system, and the certificate transcriptions.

use crate::automata::{Dfa, DfaJson};
use crate::error::{Error, Result};
use crate::holonomic::{bir_sum, birp_sum, g111_sum, g300_sum, CertificateSource, HypTerm};

pub const GOLDEN_DFA: &str = include_str!("../data/golden/bir_dfa.json");
pub const GOLDEN_SYSTEM: &str = include_str!("../data/golden/bir_system.txt");

/// Certificate transcriptions keyed by the sum they belong to.
pub const CERTIFICATES: [(&str, &str); 4] = [
    ("g111", include_str!("../data/certs/g111.cert")),
    ("g300", include_str!("../data/certs/g300.cert")),
    ("bir", include_str!("../data/certs/bir.cert")),
    ("birp", include_str!("../data/certs/birp.cert")),
];

pub fn golden_dfa() -> Result<Dfa> {
    let j: DfaJson = serde_json::from_str(GOLDEN_DFA).map_err(|e| Error::Structural(format!("golden table: {e}")))?;
    Dfa::from_json(&j)
}

pub fn certificate_source(name: &str) -> Result<CertificateSource> {
    let text = CERTIFICATES
        .iter()
        .find(|c| c.0 == name)
        .ok_or_else(|| Error::Domain(format!("no certificate named {name}")))?
        .1;
    CertificateSource::parse(text)
}

/// The summand a certificate is written for, with the eliminated variable
/// the transcription assumes.
pub fn certificate_term(name: &str) -> Result<HypTerm> {
    match name {
        "g111" => g111_sum().to_hypterm("a"),
        "g300" => g300_sum().to_hypterm("b"),
        "bir" => bir_sum().to_hypterm("a"),
        "birp" => birp_sum().to_hypterm("b"),
        _ => Err(Error::Domain(format!("no certificate named {name}"))),
    }
}
