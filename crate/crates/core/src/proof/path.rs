use std::fmt;

use serde::{Deserialize, Serialize};

/// Address of a node: the child indices on the way down from the root.
/// The derived order is the pre-order of the tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<u32>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_root()
    }

    pub fn child(&self, i: u32) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.0.split_last()?;
        Some(NodePath(init.to_vec()))
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// `self ⊆ other`: `self` is a prefix of `other`.
    pub fn is_prefix_of(&self, other: &NodePath) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_proper_prefix_of(&self, other: &NodePath) -> bool {
        self.len() < other.len() && self.is_prefix_of(other)
    }

    /// Prefixes from the root down to `self`, inclusive.
    pub fn prefixes(&self) -> impl DoubleEndedIterator<Item = NodePath> + '_ {
        (0..=self.len()).map(|k| NodePath(self.0[..k].to_vec()))
    }
}

impl From<Vec<u32>> for NodePath {
    fn from(v: Vec<u32>) -> Self {
        NodePath(v)
    }
}

impl<const N: usize> From<[u32; N]> for NodePath {
    fn from(v: [u32; N]) -> Self {
        NodePath(v.to_vec())
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_prefixes() {
        let p = NodePath::from([1, 0]);
        assert_eq!(p.to_string(), "⟨1,0⟩");
        assert_eq!(NodePath::root().to_string(), "⟨⟩");
        let pre: Vec<NodePath> = p.prefixes().collect();
        assert_eq!(pre, vec![NodePath::root(), NodePath::from([1]), p.clone()]);
        assert!(NodePath::from([1]).is_proper_prefix_of(&p));
        assert!(p.is_prefix_of(&p));
        assert!(!p.is_proper_prefix_of(&p));
    }

    #[test]
    fn order_is_preorder() {
        let mut v = vec![
            NodePath::from([1]),
            NodePath::from([0, 5]),
            NodePath::root(),
            NodePath::from([0]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                NodePath::root(),
                NodePath::from([0]),
                NodePath::from([0, 5]),
                NodePath::from([1])
            ]
        );
    }
}
