//! Scenario-runner CLI (placeholder while modules land).

pub fn main(_argv: Vec<String>) -> i32 {
    eprintln!("ssrsim: not yet wired");
    2
}
