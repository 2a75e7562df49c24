//! Constrained Shannon-Fano tree construction.
//!
//! The tree is grown top-down from the root (depth 1). A node whose depth is
//! a multiple of `max_hl` splits its symbols three ways, every other node
//! four ways, so the constrained codeword positions only ever carry bases
//! `0..=2`.

use std::ops::Range;

use crate::builders::BuilderConfig;
use crate::error::{Error, Result};
use crate::table::{FrequencyTable, Symbol};
use crate::tree::{merge_trees, CodeTree};

/// Splits `weights` (sorted by decreasing weight) into `n` contiguous slices
/// with balanced sums; `n` must be 3 or 4.
///
/// Each slice has a deviation `|slice sum - total / n|`. The result minimises
/// the deviations sorted in decreasing order, compared lexicographically: the
/// largest deviation first, then the next largest, and so on. Remaining ties
/// go to the earliest cut positions. Slices may be empty.
pub fn partition(weights: &[u64], n: usize) -> Result<Vec<Range<usize>>> {
    if n != 3 && n != 4 {
        return Err(Error::config(format!("partition arity {n}, expected 3 or 4")));
    }
    Ok(partition_n(weights, n))
}

/// Inserts `d` into a vector kept in decreasing order.
fn with_deviation(rest: &[u128], d: u128) -> Vec<u128> {
    let at = rest.partition_point(|&x| x > d);
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.extend_from_slice(&rest[..at]);
    v.push(d);
    v.extend_from_slice(&rest[at..]);
    v
}

/// [`partition`] for any `n >= 1`.
pub(crate) fn partition_n(weights: &[u64], n: usize) -> Vec<Range<usize>> {
    assert!(n >= 1);
    let len = weights.len();
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0u128);
    for &w in weights {
        prefix.push(prefix.last().unwrap() + w as u128);
    }
    let total = prefix[len];
    // deviation scaled by n to stay in integers: |n * sum - total|
    let dev = |i: usize, j: usize| (n as u128 * (prefix[j] - prefix[i])).abs_diff(total);

    // best[k][i]: optimal decreasing deviation vector for weights[i..] in k slices,
    // cut[k][i]: the earliest first cut achieving it
    let mut best: Vec<Vec<Vec<u128>>> = vec![Vec::new(); n + 1];
    let mut cut = vec![vec![len; len + 1]; n + 1];
    best[1] = (0..=len).map(|i| vec![dev(i, len)]).collect();
    for k in 2..=n {
        let mut row = Vec::with_capacity(len + 1);
        for i in 0..=len {
            let mut top: Option<Vec<u128>> = None;
            for j in i..=len {
                let cand = with_deviation(&best[k - 1][j], dev(i, j));
                if top.as_ref().is_none_or(|t| cand < *t) {
                    top = Some(cand);
                    cut[k][i] = j;
                }
            }
            row.push(top.unwrap());
        }
        best[k] = row;
    }

    let mut slices = Vec::with_capacity(n);
    let mut start = 0;
    for k in (2..=n).rev() {
        let end = cut[k][start];
        slices.push(start..end);
        start = end;
    }
    slices.push(start..len);
    slices
}

/// Builds the constrained Shannon-Fano tree for the positive-count symbols
/// of `table`.
pub fn sfc_build(table: &FrequencyTable, cfg: &BuilderConfig) -> Result<CodeTree> {
    cfg.validate()?;
    let items = table.sorted_support();
    if items.is_empty() {
        return Err(Error::input("frequency table has no positive counts"));
    }
    let tree = build_at(&items, cfg.max_hl, 1)?.expect("nonempty input");
    Ok(match tree {
        leaf @ CodeTree::Leaf(_) => CodeTree::Node(vec![leaf]),
        node => node,
    })
}

fn build_at(items: &[(Symbol, u64)], max_hl: usize, depth: usize) -> Result<Option<CodeTree>> {
    match items {
        [] => Ok(None),
        [(s, _)] => Ok(Some(CodeTree::leaf(*s))),
        _ => {
            let n = if depth % max_hl == 0 { 3 } else { 4 };
            let weights: Vec<u64> = items.iter().map(|&(_, c)| c).collect();
            let mut subtrees = Vec::with_capacity(n);
            for slice in partition(&weights, n)? {
                if let Some(t) = build_at(&items[slice], max_hl, depth + 1)? {
                    subtrees.push(t);
                }
            }
            merge_trees(subtrees).map(Some)
        }
    }
}
