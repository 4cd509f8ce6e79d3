//! The `analyze` pipeline on in-memory JSON state descriptions.

use tsteer::cli::{analyze_state, error_line, exit_code, StateSpec};

fn main() {
    let inputs = [
        r#"{"family": {"name": "werner_pd", "params": {"alpha": 0.8, "eta": 0.36}}}"#,
        r#"{"correlation": [[0.4, 0, 0], [0, -0.4, 0], [0, 0, 0.4]]}"#,
        r#"{"family": {"name": "bell_diagonal", "params": {"c1": 0.9, "c2": -0.3, "c3": 0.2}}}"#,
        r#"{"density": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    ];
    for text in inputs {
        println!("{text}");
        match StateSpec::from_json(text).and_then(|s| analyze_state(&s, 1e-9)) {
            Ok(report) => println!("{}\n", serde_json::to_string(&report).expect("report serializes")),
            Err(e) => println!("exit {}: {}\n", exit_code(&e), error_line(&e)),
        }
    }
}
