//! Shift configuration files: flat TOML, or JSON when the extension is `.json`.

use std::path::Path;

use critline::shifts::{validate_config, ShiftConfig, ShiftConfigSpec};

use crate::error::CliError;

pub fn parse_config_str(text: &str, json: bool, path: &Path) -> Result<ShiftConfig, CliError> {
    let parsed = if json {
        serde_json::from_str::<ShiftConfigSpec>(text).map_err(|e| e.to_string())
    } else {
        toml::from_str::<ShiftConfigSpec>(text).map_err(|e| e.to_string().trim_end().to_owned())
    };
    let spec = parsed.map_err(|message| CliError::Parse { path: path.to_owned(), message })?;
    Ok(validate_config(spec)?)
}

pub fn parse_config(path: &Path) -> Result<ShiftConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse_config_str(&text, json, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ShiftConfig, CliError> {
        parse_config_str(text, false, Path::new("cfg.toml"))
    }

    #[test]
    fn minimal_file_is_hardy() {
        let cfg = parse("coefficients = [1]\nshifts = [0]\nz_re = 0\nz_im = 0\n").unwrap();
        assert_eq!(cfg, ShiftConfig::hardy());
    }

    #[test]
    fn missing_key_is_named() {
        let err = parse("coefficients = [1]\nz_re = 0\nz_im = 0\n").unwrap_err();
        assert!(matches!(&err, CliError::Parse { message, .. } if message.contains("shifts")), "{err}");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let err = parse("coefficients = [1]\nshifts = [0]\nz_re = 0\nz_im = 0\nzz = 1\n").unwrap_err();
        assert!(matches!(&err, CliError::Parse { message, .. } if message.contains("zz")), "{err}");
    }

    #[test]
    fn region_violation_is_a_config_error() {
        let err = parse("coefficients = [1]\nshifts = [0]\nz_re = 2\nz_im = 2\n").unwrap_err();
        assert!(err.to_string().contains("region"), "{err}");
        assert_eq!(err.kind(), "config");
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn json_files() {
        let text = r#"{"coefficients":[1,0.5],"shifts":[0,1],"z_re":0.3,"z_im":0.1}"#;
        let cfg = parse_config_str(text, true, Path::new("cfg.json")).unwrap();
        assert_eq!(cfg.shifts(), &[0.0, 1.0]);
    }
}
