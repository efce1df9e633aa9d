use std::collections::HashSet;

use super::{PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::field::FieldElement;

/// Subproduct tree over evaluation points `u_0 .. u_{n-1}`.
///
/// Level 0 holds the linear factors `x - u_i`; each higher level multiplies
/// adjacent pairs. When a level has odd length its last node is carried up
/// unchanged. The single node of the top level is `m(x) = prod (x - u_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTree {
    points: Vec<FieldElement>,
    levels: Vec<Vec<Polynomial>>,
}

impl ProductTree {
    pub fn new(ring: &PolyRing, points: &[FieldElement]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("product tree needs at least one point".into()));
        }
        let leaves: Vec<Polynomial> = points
            .iter()
            .map(|&u| Polynomial::linear_root(ring.field(), u))
            .collect();
        let mut levels = vec![leaves];
        while levels.last().expect("non-empty").len() > 1 {
            let below = levels.last().expect("non-empty");
            let next = below
                .chunks(2)
                .map(|pair| match pair {
                    [l, r] => ring.mul(l, r),
                    [single] => single.clone(),
                    _ => unreachable!(),
                })
                .collect();
            levels.push(next);
        }
        Ok(ProductTree {
            points: points.to_vec(),
            levels,
        })
    }

    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    pub fn levels(&self) -> &[Vec<Polynomial>] {
        &self.levels
    }

    pub fn root(&self) -> &Polynomial {
        &self.levels.last().expect("non-empty")[0]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// True when node `i` of `level` has no sibling and was carried up as is.
    fn is_carried(&self, level: usize, i: usize) -> bool {
        let n = self.levels[level].len();
        n % 2 == 1 && i == n - 1
    }
}

impl PolyRing {
    /// `f(u_i)` for every tree point, by reducing `f` modulo the node
    /// polynomials from the root down to the leaves.
    pub fn multipoint_eval(&self, f: &Polynomial, tree: &ProductTree) -> Vec<FieldElement> {
        let top = tree.levels.len() - 1;
        let mut rems = vec![self.rem(f, tree.root()).expect("tree nodes are nonzero")];
        for level in (0..top).rev() {
            let nodes = &tree.levels[level];
            rems = nodes
                .iter()
                .enumerate()
                .map(|(i, node)| {
                    let parent = &rems[i / 2];
                    if tree.is_carried(level, i) {
                        parent.clone()
                    } else {
                        self.rem(parent, node).expect("tree nodes are nonzero")
                    }
                })
                .collect();
        }
        rems.iter().map(|r| r.coeff(0)).collect()
    }

    /// The unique polynomial of degree `< n` through `(points[i], values[i])`.
    ///
    /// Evaluates `m'(x)` at the points to get the barycentric weights, then
    /// combines `c_i = v_i / m'(u_i)` up the product tree as
    /// `r = r_left * M_right + r_right * M_left`.
    pub fn interpolate(
        &self,
        points: &[FieldElement],
        values: &[FieldElement],
    ) -> Result<Polynomial> {
        if points.len() != values.len() {
            return Err(Error::Input(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        let mut seen = HashSet::with_capacity(points.len());
        if let Some(dup) = points.iter().find(|&&p| !seen.insert(p)) {
            return Err(Error::Input(format!("duplicate interpolation point {dup}")));
        }
        let tree = ProductTree::new(self, points)?;
        let weights = self.multipoint_eval(&self.derivative(tree.root()), &tree);
        let f = &self.field;
        let mut combos: Vec<Polynomial> = values
            .iter()
            .zip(&weights)
            .map(|(&v, &w)| Ok(Polynomial::constant(f.div(v, w)?)))
            .collect::<Result<_>>()?;
        for level in 0..tree.levels.len() - 1 {
            let nodes = &tree.levels[level];
            combos = combos
                .chunks(2)
                .enumerate()
                .map(|(j, pair)| match pair {
                    [l, r] => {
                        let left_m = &nodes[2 * j];
                        let right_m = &nodes[2 * j + 1];
                        self.add(&self.mul(l, right_m), &self.mul(r, left_m))
                    }
                    [single] => single.clone(),
                    _ => unreachable!(),
                })
                .collect();
        }
        Ok(combos.pop().expect("one root"))
    }
}
