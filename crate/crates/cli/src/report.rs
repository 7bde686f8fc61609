//! Reports in the text and machine formats.
//!
//! The machine format is one `key value` pair per line with the stable keys
//! `command`, `object`, `status` (`holds`, `fails`, `ok` or `error`), `checked`,
//! `skipped`, `witness`, `entry` and `message`; repeated keys keep their order.

use std::fmt::Display;

use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub object: String,
    pub status: Status,
    pub lines: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Error,
}

impl Status {
    fn key(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Error => 2,
        }
    }
}

impl Report {
    pub fn new(command: &str, object: &str, status: Status) -> Self {
        Report { command: command.into(), object: object.into(), status, lines: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl Display) -> Self {
        self.lines.push((key.into(), value.to_string()));
        self
    }

    pub fn push(&mut self, key: &str, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Machine => {
                let mut out = format!("command {}\nobject {}\nstatus {}\n", self.command, self.object, self.status.key());
                for (k, v) in &self.lines {
                    out.push_str(&format!("{k} {v}\n"));
                }
                out
            }
            Format::Text => {
                let mut out = format!("{} {}: {}\n", self.command, self.object, self.status.key());
                for (k, v) in &self.lines {
                    out.push_str(&format!("  {k}: {v}\n"));
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_lines_are_key_value() {
        let r = Report::new("obstruct", "H", Status::Fails).with("entry", "g=1 ((0,1),(1,2)) dims 1 vs 0");
        assert_eq!(
            r.render(Format::Machine),
            "command obstruct\nobject H\nstatus fails\nentry g=1 ((0,1),(1,2)) dims 1 vs 0\n"
        );
        assert_eq!(r.render(Format::Text), "obstruct H: fails\n  entry: g=1 ((0,1),(1,2)) dims 1 vs 0\n");
        assert_eq!(r.status.exit_code(), 1);
    }
}
