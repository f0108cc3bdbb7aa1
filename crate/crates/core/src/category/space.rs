use crate::error::{Error, Result};

/// A finite topological space, recorded as its poset of opens.
///
/// `leq[a][b]` means open `a` is contained in open `b`. The relation is stored
/// reflexively and transitively closed. The whole space is the unique top
/// element and the empty set the unique bottom element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    top: usize,
    bottom: usize,
}

impl FiniteSpace {
    /// Builds the space from open names and generating inclusions
    /// `(smaller, larger)`, closing the relation under reflexivity and
    /// transitivity.
    pub fn new(names: Vec<String>, inclusions: &[(usize, usize)]) -> Result<FiniteSpace> {
        let n = names.len();
        if n < 2 {
            return Err(Error::input(
                "a finite space needs at least the whole space and the empty open",
            ));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::input(format!("open `{name}` declared twice")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in inclusions {
            if a >= n || b >= n {
                return Err(Error::input("inclusion refers to an unknown open"));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::input(format!(
                        "inclusions make `{}` and `{}` equal",
                        names[i], names[j]
                    )));
                }
            }
        }
        let tops: Vec<usize> = (0..n).filter(|&t| (0..n).all(|i| leq[i][t])).collect();
        let bottoms: Vec<usize> = (0..n).filter(|&b| (0..n).all(|i| leq[b][i])).collect();
        let (Some(&top), Some(&bottom)) = (tops.first(), bottoms.first()) else {
            return Err(Error::input(
                "the opens need a largest element (the space) and a smallest (the empty set)",
            ));
        };
        Ok(FiniteSpace {
            names,
            leq,
            top,
            bottom,
        })
    }

    /// Opens `empty ⊂ U ⊂ X`.
    pub fn sierpinski() -> FiniteSpace {
        FiniteSpace::new(vec!["empty".into(), "U".into(), "X".into()], &[(0, 1), (1, 2)])
            .expect("valid poset")
    }

    /// Opens `empty ⊂ X` only: presheaves are just vector spaces at `X`.
    pub fn point() -> FiniteSpace {
        FiniteSpace::new(vec!["empty".into(), "X".into()], &[(0, 1)]).expect("valid poset")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// All pairs `(smaller, larger)` with strict inclusion.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for v in 0..n {
            for u in 0..n {
                if v != u && self.leq[v][u] {
                    out.push((v, u));
                }
            }
        }
        out
    }

    /// Strict pairs with nothing strictly in between; these generate the
    /// relation.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        self.strict_pairs()
            .into_iter()
            .filter(|&(v, u)| !(0..n).any(|w| w != v && w != u && self.leq[v][w] && self.leq[w][u]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sierpinski_shape() {
        let s = FiniteSpace::sierpinski();
        assert_eq!(s.top(), 2);
        assert_eq!(s.bottom(), 0);
        assert!(s.leq(0, 2));
        assert_eq!(s.strict_pairs().len(), 3);
        assert_eq!(s.covering_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_cycles_and_missing_top() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(FiniteSpace::new(names.clone(), &[(0, 1), (1, 0)]).is_err());
        assert!(FiniteSpace::new(names, &[]).is_err());
        let three = vec!["e".into(), "U".into(), "V".into()];
        assert!(FiniteSpace::new(three, &[(0, 1), (0, 2)]).is_err());
    }
}
