//! Labeled code trees of arity at most four.
//!
//! A child's edge label is its index in the parent's child list, so labels
//! under one node are always `0, 1, 2(, 3)` in order. The root sits at
//! depth 1; the edge leaving a node at depth `d` is written at position `d`
//! of the codeword.

use crate::error::{Error, Result};
use crate::table::Symbol;

pub const MAX_ARITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodeTree {
    Leaf(Symbol),
    Node(Vec<CodeTree>),
}

impl CodeTree {
    pub fn leaf(symbol: Symbol) -> Self {
        CodeTree::Leaf(symbol)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, CodeTree::Leaf(_))
    }

    pub fn children(&self) -> &[CodeTree] {
        match self {
            CodeTree::Leaf(_) => &[],
            CodeTree::Node(c) => c,
        }
    }

    /// Follows one labeled edge.
    pub fn child(&self, label: u8) -> Option<&CodeTree> {
        self.children().get(label as usize)
    }

    /// Visits every node with its depth, parents before children.
    pub fn walk<F: FnMut(usize, &CodeTree)>(&self, mut f: F) {
        fn go<F: FnMut(usize, &CodeTree)>(t: &CodeTree, depth: usize, f: &mut F) {
            f(depth, t);
            for c in t.children() {
                go(c, depth + 1, f);
            }
        }
        go(self, 1, &mut f);
    }

    /// Leaves in label order together with their root-to-leaf label paths.
    pub fn leaves(&self) -> Vec<(Symbol, Vec<u8>)> {
        fn go(t: &CodeTree, path: &mut Vec<u8>, out: &mut Vec<(Symbol, Vec<u8>)>) {
            match t {
                CodeTree::Leaf(s) => out.push((*s, path.clone())),
                CodeTree::Node(children) => {
                    for (label, c) in children.iter().enumerate() {
                        path.push(label as u8);
                        go(c, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn height(&self) -> usize {
        let mut h = 0;
        self.walk(|d, _| h = h.max(d));
        h
    }

    /// Checks arity bounds, non-empty internal nodes and symbol uniqueness.
    pub fn validate(&self) -> Result<()> {
        let mut err = None;
        let mut seen = std::collections::BTreeSet::new();
        self.walk(|depth, node| {
            if err.is_some() {
                return;
            }
            match node {
                CodeTree::Leaf(s) => {
                    if !seen.insert(*s) {
                        err = Some(Error::structural(format!("symbol {s} appears in two leaves")));
                    }
                }
                CodeTree::Node(c) if c.is_empty() => {
                    err = Some(Error::structural(format!("childless internal node at depth {depth}")));
                }
                CodeTree::Node(c) if c.len() > MAX_ARITY => {
                    err = Some(Error::structural(format!(
                        "node at depth {depth} has {} children",
                        c.len()
                    )));
                }
                CodeTree::Node(_) => {}
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// True when every internal node at a depth divisible by `max_hl` has at
    /// most three children.
    pub fn satisfies_schedule(&self, max_hl: usize) -> bool {
        let mut ok = true;
        self.walk(|depth, node| {
            if let CodeTree::Node(c) = node {
                let limit = if depth % max_hl == 0 { 3 } else { MAX_ARITY };
                ok &= c.len() <= limit;
            }
        });
        ok
    }

    /// Rebuilds a tree from codewords (label paths).
    ///
    /// Labels under every node must be contiguous from 0.
    pub fn from_codewords<'a, I>(words: I) -> Result<CodeTree>
    where
        I: IntoIterator<Item = (Symbol, &'a [u8])>,
    {
        #[derive(Default)]
        struct Trie {
            symbol: Option<Symbol>,
            children: [Option<Box<Trie>>; MAX_ARITY],
        }

        let mut root = Trie::default();
        let mut any = false;
        for (sym, word) in words {
            any = true;
            if word.is_empty() {
                return Err(Error::structural(format!("symbol {sym} has an empty codeword")));
            }
            let mut node = &mut root;
            for (i, &b) in word.iter().enumerate() {
                if b as usize >= MAX_ARITY {
                    return Err(Error::structural(format!("base {b} in codeword of symbol {sym}")));
                }
                if node.symbol.is_some() {
                    return Err(Error::structural(format!(
                        "codeword of symbol {sym} extends another codeword at position {i}"
                    )));
                }
                node = node.children[b as usize].get_or_insert_with(Default::default);
            }
            if node.symbol.is_some() || node.children.iter().any(Option::is_some) {
                return Err(Error::structural(format!("codeword of symbol {sym} is a prefix of another")));
            }
            node.symbol = Some(sym);
        }
        if !any {
            return Err(Error::structural("no codewords"));
        }

        fn build(t: Trie) -> Result<CodeTree> {
            if let Some(s) = t.symbol {
                return Ok(CodeTree::Leaf(s));
            }
            let mut out = Vec::new();
            let mut gap = false;
            for (label, c) in t.children.into_iter().enumerate() {
                match c {
                    Some(_) if gap => {
                        return Err(Error::structural(format!(
                            "edge label {label} follows a missing label"
                        )))
                    }
                    Some(c) => out.push(build(*c)?),
                    None => gap = true,
                }
            }
            Ok(CodeTree::Node(out))
        }
        build(root)
    }
}

/// Joins subtrees under a fresh root; edge labels follow input order.
pub fn merge_trees(subtrees: Vec<CodeTree>) -> Result<CodeTree> {
    if subtrees.is_empty() {
        return Err(Error::structural("merge of zero subtrees"));
    }
    if subtrees.len() > MAX_ARITY {
        return Err(Error::structural(format!("merge of {} subtrees", subtrees.len())));
    }
    Ok(CodeTree::Node(subtrees))
}
