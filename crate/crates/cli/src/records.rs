//! Output records and the error-to-exit-code mapping.
//!
//! Every command emits a stream of JSON objects, one per line, with sorted
//! keys; table mode renders the same records as `key=value` rows. Exit codes:
//! 0 success, 1 reproduction failure, 2 invalid input, 3 budget or cap
//! exceeded.

use serde_json::Value;
use thiserror::Error;

use crate::config::OutputMode;
use tseq_core::characters::CharError;
use tseq_core::sequences::SequenceError;
use tseq_core::windows::WindowsError;
use tseq_core::GroupError;

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
    #[error("reproduction failed: {0}")]
    ReproFail(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 2,
            AppError::Budget(_) => 3,
            AppError::ReproFail(_) => 1,
        }
    }
}

impl From<GroupError> for AppError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => AppError::Budget(e.to_string()),
            _ => AppError::Input(e.to_string()),
        }
    }
}

impl From<WindowsError> for AppError {
    fn from(e: WindowsError) -> Self {
        match e {
            WindowsError::BudgetExceeded { .. }
            | WindowsError::Group(GroupError::CapExceeded { .. }) => {
                AppError::Budget(e.to_string())
            }
            _ => AppError::Input(e.to_string()),
        }
    }
}

impl From<SequenceError> for AppError {
    fn from(e: SequenceError) -> Self {
        match e {
            SequenceError::Group(GroupError::CapExceeded { .. }) => {
                AppError::Budget(e.to_string())
            }
            _ => AppError::Input(e.to_string()),
        }
    }
}

impl From<CharError> for AppError {
    fn from(e: CharError) -> Self {
        match e {
            CharError::CapExceeded { .. } | CharError::Group(GroupError::CapExceeded { .. }) => {
                AppError::Budget(e.to_string())
            }
            _ => AppError::Input(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for AppError {
    fn from(e: serde_json::Error) -> Self {
        AppError::Input(e.to_string())
    }
}

/// Render one record. JSON mode prints the compact object (keys sorted by
/// the underlying map); table mode prints `key=value` pairs on one row.
pub fn render(record: &Value, mode: OutputMode) -> String {
    match mode {
        OutputMode::Json => record.to_string(),
        OutputMode::Table => match record {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| match v {
                    Value::String(s) => format!("{k}={s}"),
                    other => format!("{k}={other}"),
                })
                .collect::<Vec<_>>()
                .join("  "),
            other => other.to_string(),
        },
    }
}

pub fn emit(records: &[Value], mode: OutputMode) {
    for r in records {
        println!("{}", render(r, mode));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_mode_flattens() {
        let rec = json!({"check": "gap", "value": 3});
        assert_eq!(render(&rec, OutputMode::Table), "check=gap  value=3");
        assert_eq!(render(&rec, OutputMode::Json), r#"{"check":"gap","value":3}"#);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(AppError::Input("x".into()).exit_code(), 2);
        assert_eq!(AppError::Budget("x".into()).exit_code(), 3);
        assert_eq!(AppError::ReproFail("x".into()).exit_code(), 1);
        let e: AppError = WindowsError::BudgetExceeded {
            estimated: 10,
            cap: 5,
        }
        .into();
        assert_eq!(e.exit_code(), 3);
    }
}
