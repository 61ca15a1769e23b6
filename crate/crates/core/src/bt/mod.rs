//! Memoryless behavior trees: Sequence and Fallback control nodes over
//! Condition and Action leaves.
//!
//! Trees are written in a small s-expression format:
//!
//! ```text
//! ; evade first, otherwise attack
//! (fallback
//!   (sequence (condition incoming_threat) (action evade))
//!   (action pursue))
//! ```
//!
//! Leaf names are resolved against a [`Leaves`] implementation when the tree
//! is built, so a malformed tree is rejected before it is ever ticked.

mod red;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use red::{
    red_policy_tick, Blackboard, Branch, LaunchEvent, OpponentTrack, OwnMissileSummary, RedDecision, RedPolicy,
    RedPolicyConfig, DEFAULT_RED_TREE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BtStatus {
    Success,
    Failure,
    Running,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Condition,
    Action,
}

/// Callbacks a tree's leaves dispatch to, over a tick context `C`.
pub trait Leaves<C: ?Sized> {
    /// Resolves a leaf name to a callback index.
    fn lookup(&self, kind: LeafKind, name: &str) -> Option<usize>;
    fn condition(&self, id: usize, ctx: &C) -> bool;
    fn action(&self, id: usize, ctx: &mut C) -> BtStatus;
}

/// Unresolved tree description, as parsed or hand-built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeSpec {
    Sequence(Vec<NodeSpec>),
    Fallback(Vec<NodeSpec>),
    Condition(String),
    Action(String),
}

impl NodeSpec {
    pub fn condition(name: &str) -> Self {
        Self::Condition(name.to_owned())
    }

    pub fn action(name: &str) -> Self {
        Self::Action(name.to_owned())
    }

    /// Parses the s-expression text format.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text);
        let mut pos = 0;
        let node = parse_node(&tokens, &mut pos)?;
        if let Some(t) = tokens.get(pos) {
            return Err(Error::TreeParse { line: t.line, msg: format!("unexpected trailing `{}`", t.text) });
        }
        Ok(node)
    }

    /// Resolves leaf names and validates the structure.
    pub fn build<C: ?Sized, L: Leaves<C>>(&self, leaves: &L) -> Result<BtNode> {
        match self {
            NodeSpec::Sequence(ch) | NodeSpec::Fallback(ch) => {
                if ch.is_empty() {
                    return Err(Error::TreeBuild("control node without children".into()));
                }
                let built = ch.iter().map(|c| c.build(leaves)).collect::<Result<Vec<_>>>()?;
                Ok(match self {
                    NodeSpec::Sequence(_) => BtNode::Sequence(built),
                    _ => BtNode::Fallback(built),
                })
            }
            NodeSpec::Condition(name) => leaves
                .lookup(LeafKind::Condition, name)
                .map(BtNode::Condition)
                .ok_or_else(|| Error::TreeBuild(format!("unknown condition `{name}`"))),
            NodeSpec::Action(name) => leaves
                .lookup(LeafKind::Action, name)
                .map(BtNode::Action)
                .ok_or_else(|| Error::TreeBuild(format!("unknown action `{name}`"))),
        }
    }
}

impl std::fmt::Display for NodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NodeSpec::Sequence(ch) | NodeSpec::Fallback(ch) => {
                let kw = if matches!(self, NodeSpec::Sequence(_)) { "sequence" } else { "fallback" };
                write!(f, "({kw}")?;
                for c in ch {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
            NodeSpec::Condition(n) => write!(f, "(condition {n})"),
            NodeSpec::Action(n) => write!(f, "(action {n})"),
        }
    }
}

/// A resolved node. Leaves carry callback indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BtNode {
    Sequence(Vec<BtNode>),
    Fallback(Vec<BtNode>),
    Condition(usize),
    Action(usize),
}

impl BtNode {
    /// One memoryless tick. Sequence stops at the first child that does not
    /// succeed; Fallback stops at the first child that does not fail.
    pub fn tick<C: ?Sized, L: Leaves<C>>(&self, leaves: &L, ctx: &mut C) -> BtStatus {
        match self {
            BtNode::Sequence(children) => {
                for child in children {
                    let s = child.tick(leaves, ctx);
                    if s != BtStatus::Success {
                        return s;
                    }
                }
                BtStatus::Success
            }
            BtNode::Fallback(children) => {
                for child in children {
                    let s = child.tick(leaves, ctx);
                    if s != BtStatus::Failure {
                        return s;
                    }
                }
                BtStatus::Failure
            }
            BtNode::Condition(id) => {
                if leaves.condition(*id, ctx) {
                    BtStatus::Success
                } else {
                    BtStatus::Failure
                }
            }
            BtNode::Action(id) => leaves.action(*id, ctx),
        }
    }
}

/// Free-function form of [`BtNode::tick`].
pub fn tick<C: ?Sized, L: Leaves<C>>(node: &BtNode, leaves: &L, ctx: &mut C) -> BtStatus {
    node.tick(leaves, ctx)
}

struct Token<'a> {
    text: &'a str,
    line: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("");
        let mut start = None;
        for (j, ch) in line.char_indices() {
            let delim = ch == '(' || ch == ')' || ch.is_whitespace();
            if delim {
                if let Some(s) = start.take() {
                    out.push(Token { text: &line[s..j], line: i + 1 });
                }
                if ch != ' ' && !ch.is_whitespace() {
                    out.push(Token { text: &line[j..j + 1], line: i + 1 });
                }
            } else if start.is_none() {
                start = Some(j);
            }
        }
        if let Some(s) = start {
            out.push(Token { text: &line[s..], line: i + 1 });
        }
    }
    out
}

fn parse_node(tokens: &[Token<'_>], pos: &mut usize) -> Result<NodeSpec> {
    let last_line = tokens.last().map_or(1, |t| t.line);
    let eof = || Error::TreeParse { line: last_line, msg: "unexpected end of input".into() };
    let open = tokens.get(*pos).ok_or_else(eof)?;
    if open.text != "(" {
        return Err(Error::TreeParse { line: open.line, msg: format!("expected `(`, found `{}`", open.text) });
    }
    *pos += 1;
    let kw = tokens.get(*pos).ok_or_else(eof)?;
    *pos += 1;
    let node = match kw.text {
        "sequence" | "fallback" => {
            let mut children = Vec::new();
            while tokens.get(*pos).ok_or_else(eof)?.text != ")" {
                children.push(parse_node(tokens, pos)?);
            }
            if kw.text == "sequence" {
                NodeSpec::Sequence(children)
            } else {
                NodeSpec::Fallback(children)
            }
        }
        "condition" | "action" => {
            let name = tokens.get(*pos).ok_or_else(eof)?;
            if name.text == "(" || name.text == ")" {
                return Err(Error::TreeParse { line: name.line, msg: format!("`{}` needs a leaf name", kw.text) });
            }
            *pos += 1;
            if kw.text == "condition" {
                NodeSpec::condition(name.text)
            } else {
                NodeSpec::action(name.text)
            }
        }
        other => {
            return Err(Error::TreeParse { line: kw.line, msg: format!("unknown node kind `{other}`") });
        }
    };
    let close = tokens.get(*pos).ok_or_else(eof)?;
    if close.text != ")" {
        return Err(Error::TreeParse { line: close.line, msg: format!("expected `)`, found `{}`", close.text) });
    }
    *pos += 1;
    Ok(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three scripted leaves `a`, `b`, `c`; records which ones ran.
    struct Scripted;

    struct Script {
        status: [BtStatus; 3],
        ticked: Vec<usize>,
    }

    impl Leaves<Script> for Scripted {
        fn lookup(&self, kind: LeafKind, name: &str) -> Option<usize> {
            match (kind, name) {
                (LeafKind::Action, "a") => Some(0),
                (LeafKind::Action, "b") => Some(1),
                (LeafKind::Action, "c") => Some(2),
                (LeafKind::Condition, "yes") => Some(10),
                (LeafKind::Condition, "no") => Some(11),
                _ => None,
            }
        }

        fn condition(&self, id: usize, _ctx: &Script) -> bool {
            id == 10
        }

        fn action(&self, id: usize, ctx: &mut Script) -> BtStatus {
            ctx.ticked.push(id);
            ctx.status[id]
        }
    }

    const ALL: [BtStatus; 3] = [BtStatus::Success, BtStatus::Failure, BtStatus::Running];

    fn three(kind: &str) -> BtNode {
        NodeSpec::parse(&format!("({kind} (action a) (action b) (action c))")).unwrap().build(&Scripted).unwrap()
    }

    // Brute-force reference: walk children left to right, stop on the first
    // status other than `pass`; if none, the result is `pass`.
    fn oracle(status: [BtStatus; 3], pass: BtStatus) -> (BtStatus, usize) {
        for (i, s) in status.iter().enumerate() {
            if *s != pass {
                return (*s, i + 1);
            }
        }
        (pass, 3)
    }

    #[test]
    fn sequence_stops_at_first_failure() {
        let tree = three("sequence");
        let mut ctx = Script { status: [BtStatus::Success, BtStatus::Failure, BtStatus::Success], ticked: vec![] };
        assert_eq!(tree.tick(&Scripted, &mut ctx), BtStatus::Failure);
        assert_eq!(ctx.ticked, vec![0, 1]);
    }

    #[test]
    fn fallback_stops_at_first_success() {
        let tree = NodeSpec::parse("(fallback (action a) (action b))").unwrap().build(&Scripted).unwrap();
        let mut ctx = Script { status: [BtStatus::Failure, BtStatus::Success, BtStatus::Failure], ticked: vec![] };
        assert_eq!(tree.tick(&Scripted, &mut ctx), BtStatus::Success);
    }

    #[test]
    fn exhaustive_truth_tables() {
        for (kind, pass) in [("sequence", BtStatus::Success), ("fallback", BtStatus::Failure)] {
            let tree = three(kind);
            let mut cases = 0;
            for a in ALL {
                for b in ALL {
                    for c in ALL {
                        let status = [a, b, c];
                        let mut ctx = Script { status, ticked: vec![] };
                        let got = tree.tick(&Scripted, &mut ctx);
                        let (want, ran) = oracle(status, pass);
                        assert_eq!(got, want, "{kind} {status:?}");
                        assert_eq!(ctx.ticked.len(), ran);
                        cases += 1;
                    }
                }
            }
            assert_eq!(cases, 27);
        }
    }

    #[test]
    fn conditions_map_to_success_failure() {
        let tree = NodeSpec::parse("(sequence (condition yes) (action a))").unwrap().build(&Scripted).unwrap();
        let mut ctx = Script { status: [BtStatus::Running; 3], ticked: vec![] };
        assert_eq!(tree.tick(&Scripted, &mut ctx), BtStatus::Running);
        let tree = NodeSpec::parse("(sequence (condition no) (action a))").unwrap().build(&Scripted).unwrap();
        assert_eq!(tree.tick(&Scripted, &mut ctx), BtStatus::Failure);
    }

    #[test]
    fn malformed_trees_are_rejected_at_build() {
        assert!(matches!(NodeSpec::parse("(sequence)").unwrap().build(&Scripted), Err(Error::TreeBuild(_))));
        assert!(matches!(NodeSpec::parse("(action zzz)").unwrap().build(&Scripted), Err(Error::TreeBuild(_))));
        assert!(matches!(NodeSpec::parse("(condition a)").unwrap().build(&Scripted), Err(Error::TreeBuild(_))));
        assert!(matches!(NodeSpec::parse("(parallel (action a))"), Err(Error::TreeParse { .. })));
        assert!(matches!(NodeSpec::parse("(sequence (action a)"), Err(Error::TreeParse { .. })));
        assert!(matches!(NodeSpec::parse("(action a) (action b)"), Err(Error::TreeParse { .. })));
        let err = NodeSpec::parse("(fallback\n  (action a)\n  (bogus b))").unwrap_err();
        assert!(matches!(err, Error::TreeParse { line: 3, .. }));
    }

    #[test]
    fn comments_and_display_round_trip() {
        let text = "; top\n(fallback ; pick one\n (sequence (condition yes) (action a))\n (action b))";
        let spec = NodeSpec::parse(text).unwrap();
        assert_eq!(NodeSpec::parse(&spec.to_string()).unwrap(), spec);
    }
}
