//! Scenarios shipped with the runner, keyed `paper:<name>`.

use crate::scenario::{parse_scenario, Scenario};
use crate::CliError;

pub const BUILTINS: &[(&str, &str)] = &[
    ("paper:fpt-y", include_str!("../builtins/fpt-y.json")),
    (
        "paper:ti-minus-ti1",
        include_str!("../builtins/ti-minus-ti1.json"),
    ),
    ("paper:notCA", include_str!("../builtins/notCA.json")),
    ("paper:sqrt-t", include_str!("../builtins/sqrt-t.json")),
    (
        "paper:composite",
        include_str!("../builtins/composite.json"),
    ),
    (
        "paper:artin-schreier",
        include_str!("../builtins/artin-schreier.json"),
    ),
    (
        "paper:cofinal-approx",
        include_str!("../builtins/cofinal-approx.json"),
    ),
    ("paper:exchange", include_str!("../builtins/exchange.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<Scenario, CliError> {
    let text = source(name).ok_or_else(|| CliError::UnknownName(name.to_string()))?;
    parse_scenario(text)
}
