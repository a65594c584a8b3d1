//! Replays the shell sessions in the guide's command-line chapter.

use std::path::Path;
use std::process::Command;

struct Step {
    command: String,
    expected: String,
}

fn transcripts(markdown: &str) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::new();
    let mut in_block = false;
    for line in markdown.lines() {
        if line.starts_with("```") {
            in_block = line == "```text";
            continue;
        }
        if !in_block {
            continue;
        }
        if let Some(cmd) = line.strip_prefix("$ ") {
            steps.push(Step {
                command: cmd.to_owned(),
                expected: String::new(),
            });
        } else if let Some(step) = steps.last_mut() {
            step.expected.push_str(line);
            step.expected.push('\n');
        }
    }
    steps
}

#[test]
fn cli_chapter_matches_the_binary() {
    let chapter = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../book/src/cli.md");
    let steps = transcripts(&std::fs::read_to_string(chapter).unwrap());
    assert!(steps.len() >= 5);
    let bin_dir = Path::new(env!("CARGO_BIN_EXE_lpp")).parent().unwrap().to_owned();
    let path = format!("{}:{}", bin_dir.display(), std::env::var("PATH").unwrap_or_default());
    let work = tempfile::tempdir().unwrap();
    for step in steps {
        let out = Command::new("sh")
            .arg("-c")
            .arg(format!("{} 2>&1", step.command))
            .env("PATH", &path)
            .current_dir(work.path())
            .output()
            .unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), step.expected, "$ {}", step.command);
    }
}
