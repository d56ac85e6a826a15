//! Owned, fully expanded internal terms.
//!
//! The arena is the working representation; `Tree` is the plain recursive
//! form used by the rewrite oracle and by small-term enumeration, where
//! obviousness matters more than sharing.

use std::fmt;

/// An internal-language term. The derived ordering is the canonical total
/// order: constants, then variables by name, then negations by child, then
/// joins by lexicographic child list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Zero,
    One,
    Var(String),
    Neg(Box<Tree>),
    Join(Vec<Tree>),
}

impl Tree {
    pub fn var(name: &str) -> Tree {
        Tree::Var(name.to_owned())
    }

    pub fn neg(child: Tree) -> Tree {
        Tree::Neg(Box::new(child))
    }

    pub fn join(children: Vec<Tree>) -> Tree {
        Tree::Join(children)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Tree::Zero | Tree::One | Tree::Var(_) => 1,
            Tree::Neg(c) => 1 + c.size(),
            Tree::Join(cs) => 1 + cs.iter().map(Tree::size).sum::<usize>(),
        }
    }

    pub fn children(&self) -> &[Tree] {
        match self {
            Tree::Neg(c) => std::slice::from_ref(c),
            Tree::Join(cs) => cs,
            _ => &[],
        }
    }

    /// Subterm at `path` (child indices from the root).
    pub fn at(&self, path: &[usize]) -> Option<&Tree> {
        path.iter().try_fold(self, |t, &i| t.children().get(i))
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &Tree, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
            match t {
                Tree::Zero => f.write_str("0"),
                Tree::One => f.write_str("1"),
                Tree::Var(v) => f.write_str(v),
                Tree::Neg(c) => {
                    f.write_str("!")?;
                    go(c, f, true)
                }
                Tree::Join(cs) => {
                    let parens = nested || cs.len() == 1;
                    if parens {
                        f.write_str("(")?;
                    }
                    for (i, c) in cs.iter().enumerate() {
                        if i > 0 {
                            f.write_str(" | ")?;
                        }
                        go(c, f, true)?;
                    }
                    if parens {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}
