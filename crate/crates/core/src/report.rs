//! Pass/fail items produced by the verification routines.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem { name: name.into(), passed, detail: detail.into() }
    }
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        if self.detail.is_empty() {
            write!(f, "{tag}\t{}", self.name)
        } else {
            write!(f, "{tag}\t{}\t{}", self.name, self.detail)
        }
    }
}

pub fn all_passed(items: &[CheckItem]) -> bool {
    items.iter().all(|i| i.passed)
}

/// One line per item.
pub fn render(items: &[CheckItem]) -> String {
    items.iter().map(|i| format!("{i}\n")).collect()
}
