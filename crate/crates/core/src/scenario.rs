//! Line-oriented scenario replay.
//!
//! A scenario file drives a fresh store, one command per line. Blank lines
//! and `#` comments are skipped. Integers are decimal or `0x`-prefixed hex.
//!
//! ```text
//! get_node 5          # run the lookup; remembers the return code
//! create_node 7       # direct node creation
//! expect_code 1611    # assert the last operation's return code
//! expect_list 7 5     # assert the list handles, head to tail
//! snapshot            # remember the current memory and list
//! assert_unchanged    # the remembered list is unchanged since snapshot
//! ```
//!
//! After every mutating command the runner asserts bank validity, list
//! well-formedness and freshness of all known references. The first failed
//! expectation or invariant stops the run with its line number.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::logic_lists::{linked_ll, unchanged_ll, LogicList};
use crate::memory_model::{Bank, Memory, MemorySnapshot, NodeRef};
use crate::resource_store::{create_node, get_node, list_handles, store_list, Context, Slot};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioCommand {
    GetNode { handle: u32 },
    CreateNode { handle: u32 },
    ExpectCode { code: u32 },
    ExpectList { handles: Vec<u32> },
    Snapshot,
    AssertUnchanged,
}

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Debug, Error)]
#[error("line {line}: {msg}")]
pub struct RunFailure {
    pub line: usize,
    pub msg: String,
    /// Transcript of everything executed before the failure.
    pub transcript: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Failed(#[from] RunFailure),
}

fn parse_int(token: &str) -> Result<u32, String> {
    let parsed = match token.strip_prefix("0x") {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => token.parse(),
    };
    parsed.map_err(|_| format!("invalid integer `{token}`"))
}

/// Parse a whole scenario, keeping source line numbers.
pub fn parse_scenario(text: &str) -> Result<Vec<(usize, ScenarioCommand)>, ParseError> {
    let mut commands = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fail = |msg: String| ParseError { line, msg };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let op = tokens.next().expect("nonempty line");
        let args: Vec<&str> = tokens.collect();
        let one_arg = |what: &str| -> Result<u32, ParseError> {
            match args.as_slice() {
                [token] => parse_int(token).map_err(fail),
                _ => Err(fail(format!("{op} takes exactly one {what}"))),
            }
        };
        let command = match op {
            "get_node" => ScenarioCommand::GetNode {
                handle: one_arg("handle")?,
            },
            "create_node" => ScenarioCommand::CreateNode {
                handle: one_arg("handle")?,
            },
            "expect_code" => ScenarioCommand::ExpectCode {
                code: one_arg("code")?,
            },
            "expect_list" => {
                let handles = args
                    .iter()
                    .map(|t| parse_int(t))
                    .collect::<Result<Vec<u32>, String>>()
                    .map_err(fail)?;
                ScenarioCommand::ExpectList { handles }
            }
            "snapshot" | "assert_unchanged" if !args.is_empty() => {
                return Err(fail(format!("{op} takes no arguments")));
            }
            "snapshot" => ScenarioCommand::Snapshot,
            "assert_unchanged" => ScenarioCommand::AssertUnchanged,
            other => return Err(fail(format!("unknown command `{other}`"))),
        };
        commands.push((line, command));
    }
    Ok(commands)
}

struct Runner {
    bank: Bank,
    ctx: Context,
    out: Slot,
    last_code: Option<u32>,
    saved: Option<(MemorySnapshot, LogicList)>,
    transcript: Vec<String>,
}

impl Runner {
    /// Well-formedness, bank validity and freshness over all known refs.
    fn check_invariants(&self) -> Result<(), String> {
        if !self.bank.valid_bank() {
            return Err("bank validity lost".into());
        }
        let ll = store_list(&self.bank, &self.ctx).map_err(|e| e.to_string())?;
        if !linked_ll(&self.bank, self.ctx.rsrc_list, NodeRef::NIL, &ll) {
            return Err("resource list is not well-formed".into());
        }
        if !self
            .bank
            .is_fresh_free(ll.iter().chain([self.ctx.rsrc_list, self.out.content]))
        {
            return Err("freshness lost: a known ref entered the allocable region".into());
        }
        Ok(())
    }

    fn current_handles(&self) -> Result<Vec<u32>, String> {
        let ll = store_list(&self.bank, &self.ctx).map_err(|e| e.to_string())?;
        Ok(list_handles(&self.bank, &ll))
    }

    fn execute(&mut self, line: usize, command: &ScenarioCommand) -> Result<(), String> {
        match command {
            ScenarioCommand::GetNode { handle } => {
                let code = get_node(&mut self.bank, &mut self.ctx, *handle, &mut self.out);
                self.last_code = Some(code.value());
                self.transcript
                    .push(format!("{line}: get_node {handle} -> {code}"));
                self.check_invariants()
            }
            ScenarioCommand::CreateNode { handle } => {
                let code = create_node(&mut self.bank, &mut self.ctx, *handle, &mut self.out);
                self.last_code = Some(code.value());
                self.transcript
                    .push(format!("{line}: create_node {handle} -> {code}"));
                self.check_invariants()
            }
            ScenarioCommand::ExpectCode { code } => {
                let got = self
                    .last_code
                    .ok_or("expect_code before any operation".to_string())?;
                if got != *code {
                    return Err(format!("expected code {code}, got {got}"));
                }
                self.transcript
                    .push(format!("{line}: expect_code {code} ok"));
                Ok(())
            }
            ScenarioCommand::ExpectList { handles } => {
                let got = self.current_handles()?;
                if got != *handles {
                    return Err(format!("expected list {handles:?}, got {got:?}"));
                }
                self.transcript
                    .push(format!("{line}: expect_list {handles:?} ok"));
                Ok(())
            }
            ScenarioCommand::Snapshot => {
                let ll = store_list(&self.bank, &self.ctx).map_err(|e| e.to_string())?;
                self.saved = Some((self.bank.snapshot(), ll));
                self.transcript.push(format!("{line}: snapshot"));
                Ok(())
            }
            ScenarioCommand::AssertUnchanged => {
                let (snap, ll) = self
                    .saved
                    .as_ref()
                    .ok_or("assert_unchanged before any snapshot".to_string())?;
                if !unchanged_ll(snap, &self.bank, ll) {
                    return Err(format!("list {ll:?} changed since snapshot"));
                }
                self.transcript.push(format!("{line}: assert_unchanged ok"));
                Ok(())
            }
        }
    }
}

/// Execute parsed commands against a fresh store.
///
/// Returns the transcript on success. Execution is a pure function of
/// (commands, bank_capacity): identical inputs give identical transcripts.
pub fn run_scenario(
    commands: &[(usize, ScenarioCommand)],
    bank_capacity: usize,
) -> Result<Vec<String>, RunFailure> {
    let bank = Bank::new(bank_capacity).map_err(|e| RunFailure {
        line: 0,
        msg: e.to_string(),
        transcript: Vec::new(),
    })?;
    let mut runner = Runner {
        bank,
        ctx: Context::new(),
        out: Slot::new(0),
        last_code: None,
        saved: None,
        transcript: Vec::new(),
    };
    for (line, command) in commands {
        if let Err(msg) = runner.execute(*line, command) {
            return Err(RunFailure {
                line: *line,
                msg,
                transcript: runner.transcript,
            });
        }
    }
    Ok(runner.transcript)
}

/// Read, parse and run a scenario file.
pub fn run_scenario_file(
    path: impl AsRef<Path>,
    bank_capacity: usize,
) -> Result<Vec<String>, ScenarioError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let commands = parse_scenario(&text)?;
    Ok(run_scenario(&commands, bank_capacity)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_text(text: &str, capacity: usize) -> Result<Vec<String>, RunFailure> {
        run_scenario(&parse_scenario(text).unwrap(), capacity)
    }

    #[test]
    fn parses_comments_blanks_and_hex() {
        let text = "\n# header\nget_node 0x10 # inline comment\n\nexpect_code 1611\n";
        let commands = parse_scenario(text).unwrap();
        assert_eq!(
            commands,
            vec![
                (3, ScenarioCommand::GetNode { handle: 16 }),
                (5, ScenarioCommand::ExpectCode { code: 1611 }),
            ]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_scenario("get_node 1\nnonsense 2\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("nonsense"));

        let err = parse_scenario("get_node\n").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_scenario("get_node 1 2\n").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_scenario("expect_list 1 x\n").unwrap_err();
        assert!(err.msg.contains('x'));

        let err = parse_scenario("snapshot now\n").unwrap_err();
        assert!(err.msg.contains("no arguments"));
    }

    #[test]
    fn lookup_idempotence_scenario() {
        let text = "get_node 5\nexpect_code 1611\nget_node 5\nexpect_code 616\n";
        assert!(run_text(text, 8).is_ok());
    }

    #[test]
    fn exhaustion_scenario_on_capacity_one() {
        let text = "get_node 5\nexpect_code 1611\nget_node 7\nexpect_code 833\nexpect_list 5\n";
        assert!(run_text(text, 1).is_ok());
    }

    #[test]
    fn expectation_failure_reports_line() {
        let err = run_text("get_node 5\nexpect_code 616\n", 8).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.msg.contains("616"));
        assert_eq!(err.transcript.len(), 1);
    }

    #[test]
    fn expect_code_without_operation_fails() {
        let err = run_text("expect_code 616\n", 8).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn assert_unchanged_without_snapshot_fails() {
        let err = run_text("assert_unchanged\n", 8).unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn snapshot_and_unchanged_across_lookup() {
        let text = "get_node 5\nsnapshot\nget_node 5\nexpect_code 616\nassert_unchanged\n";
        assert!(run_text(text, 8).is_ok());
    }

    #[test]
    fn expect_list_tracks_head_insertion() {
        let text = "get_node 5\nget_node 7\nexpect_list 7 5\nexpect_code 1611\n";
        assert!(run_text(text, 8).is_ok());

        let err = run_text("get_node 5\nexpect_list 9\n", 8).unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn empty_expect_list_matches_empty_store() {
        assert!(run_text("expect_list\n", 4).is_ok());
    }

    #[test]
    fn transcripts_are_deterministic() {
        let text = "get_node 1\nget_node 2\nget_node 1\nexpect_list 2 1\n";
        let a = run_text(text, 4).unwrap();
        let b = run_text(text, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn zero_capacity_is_reported() {
        let err = run_text("get_node 1\n", 0).unwrap_err();
        assert_eq!(err.line, 0);
    }
}
