use std::fs;
use std::path::Path;

use serde::Deserialize;

use qexp::Spectrum;

/// On-disk spectrum: `{"values": [..], "label": ".."}`.
#[derive(Debug, Clone, Deserialize)]
pub struct SpectrumFile {
    pub values: Vec<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug)]
pub enum InputError {
    Io(String),
    Parse(String),
    Invalid(qexp::Error),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Io(m) | InputError::Parse(m) => f.write_str(m),
            InputError::Invalid(e) => write!(f, "invalid spectrum: {e}"),
        }
    }
}

impl SpectrumFile {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Parse(format!("spectrum file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, InputError> {
        let text = fs::read_to_string(path)
            .map_err(|e| InputError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn spectrum(&self) -> Result<Spectrum, InputError> {
        Spectrum::new(self.values.clone()).map_err(InputError::Invalid)
    }
}

/// Parses `"0.5,0.5"` into numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| format!("not a number: {t:?}"))
        })
        .collect()
}
