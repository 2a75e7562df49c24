//! b-ary Huffman trees and the constrained quaternary Huffman baseline.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::builders::BuilderConfig;
use crate::error::{Error, Result};
use crate::table::{FrequencyTable, Symbol};
use crate::tree::CodeTree;

#[derive(Debug, Clone)]
enum Kind {
    Leaf(Symbol),
    Dummy,
    Node(Vec<WeightedTree>),
}

/// Huffman tree that keeps subtree weights around for post-processing.
#[derive(Debug, Clone)]
struct WeightedTree {
    weight: u64,
    min_id: usize,
    kind: Kind,
}

impl WeightedTree {
    fn order_key(&self) -> (Reverse<u64>, usize) {
        (Reverse(self.weight), self.min_id)
    }

    fn into_code_tree(self) -> Option<CodeTree> {
        match self.kind {
            Kind::Leaf(s) => Some(CodeTree::leaf(s)),
            Kind::Dummy => None,
            Kind::Node(children) => {
                let c: Vec<CodeTree> = children.into_iter().filter_map(Self::into_code_tree).collect();
                Some(CodeTree::Node(c))
            }
        }
    }
}

// Min-heap entry: lowest weight first, ties by lowest minimum symbol id.
struct HeapEntry(WeightedTree);

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (other.0.weight, other.0.min_id).cmp(&(self.0.weight, self.0.min_id))
    }
}

fn weighted_huffman(table: &FrequencyTable, arity: usize) -> Result<WeightedTree> {
    if !(2..=4).contains(&arity) {
        return Err(Error::config(format!("huffman arity {arity}, expected 2, 3 or 4")));
    }
    let items = table.sorted_support();
    if items.is_empty() {
        return Err(Error::input("frequency table has no positive counts"));
    }
    let mut heap: BinaryHeap<HeapEntry> = items
        .iter()
        .map(|&(s, c)| {
            HeapEntry(WeightedTree {
                weight: c,
                min_id: s.0,
                kind: Kind::Leaf(s),
            })
        })
        .collect();
    if items.len() == 1 {
        let only = heap.pop().unwrap().0;
        return Ok(WeightedTree {
            weight: only.weight,
            min_id: only.min_id,
            kind: Kind::Node(vec![only]),
        });
    }

    // pad so every merge takes exactly `arity` nodes
    let mut n = items.len();
    let mut dummy_id = table.len();
    while (n - 1) % (arity - 1) != 0 {
        heap.push(HeapEntry(WeightedTree {
            weight: 0,
            min_id: dummy_id,
            kind: Kind::Dummy,
        }));
        dummy_id += 1;
        n += 1;
    }

    while heap.len() > 1 {
        let mut group: Vec<WeightedTree> = (0..arity).map(|_| heap.pop().unwrap().0).collect();
        // heaviest child gets label 0; dummies end up last and prune cleanly
        group.sort_by_key(WeightedTree::order_key);
        heap.push(HeapEntry(WeightedTree {
            weight: group.iter().map(|t| t.weight).sum(),
            min_id: group.iter().map(|t| t.min_id).min().unwrap(),
            kind: Kind::Node(group),
        }));
    }
    Ok(heap.pop().unwrap().0)
}

/// Optimal `arity`-ary prefix code tree (arity 2, 3 or 4).
pub fn huffman_build(table: &FrequencyTable, arity: usize) -> Result<CodeTree> {
    Ok(weighted_huffman(table, arity)?
        .into_code_tree()
        .expect("root holds real symbols"))
}

/// Quaternary Huffman tree repaired to respect the arity schedule.
///
/// Standard quaternary merging runs first. A top-down pass then visits every
/// node at a depth divisible by `max_hl`; when such a node has four children
/// its lightest child moves one level down, under the next lightest sibling.
/// Depths below a repaired node shift accordingly before they are visited.
pub fn huffman_constrained_build(table: &FrequencyTable, cfg: &BuilderConfig) -> Result<CodeTree> {
    cfg.validate()?;
    let mut root = weighted_huffman(table, 4)?;
    enforce_schedule(&mut root, 1, cfg.max_hl);
    Ok(root.into_code_tree().expect("root holds real symbols"))
}

fn enforce_schedule(node: &mut WeightedTree, depth: usize, max_hl: usize) {
    let Kind::Node(children) = &mut node.kind else {
        return;
    };
    // dummies take no branch in the final tree
    children.retain(|c| !matches!(c.kind, Kind::Dummy));
    if depth % max_hl == 0 && children.len() > 3 {
        children.sort_by_key(WeightedTree::order_key);
        let lightest = children.pop().unwrap();
        let last = children.len() - 1;
        push_down(&mut children[last], lightest);
        children.sort_by_key(WeightedTree::order_key);
    }
    for c in children.iter_mut() {
        enforce_schedule(c, depth + 1, max_hl);
    }
}

/// Makes `extra` a child of `target`. A leaf target becomes a binary node; a
/// full target passes its own lightest child further down.
fn push_down(target: &mut WeightedTree, extra: WeightedTree) {
    let weight = target.weight + extra.weight;
    let min_id = target.min_id.min(extra.min_id);
    match &mut target.kind {
        Kind::Node(children) => {
            children.retain(|c| !matches!(c.kind, Kind::Dummy));
            children.push(extra);
            children.sort_by_key(WeightedTree::order_key);
            if children.len() > 4 {
                let lightest = children.pop().unwrap();
                let last = children.len() - 1;
                push_down(&mut children[last], lightest);
                children.sort_by_key(WeightedTree::order_key);
            }
        }
        _ => {
            let old = std::mem::replace(&mut target.kind, Kind::Dummy);
            let old = WeightedTree { kind: old, ..*target };
            let mut pair = vec![old, extra];
            pair.sort_by_key(WeightedTree::order_key);
            target.kind = Kind::Node(pair);
        }
    }
    target.weight = weight;
    target.min_id = min_id;
}
