//! Discriminant groups L^v / L and their quadratic forms.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{matrix, GramLattice, LatticeError};
use crate::scalar::{int, rat_mod, Rat, Scalar};

#[derive(Clone, Debug)]
pub struct DiscriminantGroup<I> {
    gram: matrix::IMat<I>,
    /// Orders of the cyclic factors, ascending.
    pub orders: Vec<I>,
    /// Generators in lattice coordinates, reduced into [0,1).
    pub generators: Vec<Vec<Rat<I>>>,
    /// q(g) in Q/2Z, reduced into [0,2).
    pub q_values: Vec<Rat<I>>,
}

#[derive(Serialize)]
pub struct DiscriminantSummary {
    pub orders: Vec<String>,
    pub generators: Vec<Vec<String>>,
    pub q_values: Vec<String>,
}

pub fn reduce_mod1<I: Scalar>(x: &[Rat<I>]) -> Vec<Rat<I>> {
    x.iter().map(|c| c.clone() - c.floor()).collect()
}

impl<I: Scalar> DiscriminantGroup<I> {
    pub fn of(l: &GramLattice<I>) -> Result<Self, LatticeError> {
        l.discriminant()?;
        let n = l.rank();
        let s = matrix::smith(l.gram());
        let mut gens: Vec<(I, Vec<Rat<I>>)> = Vec::new();
        for i in 0..n {
            let d = s.diag[i].clone();
            if d.is_one() {
                continue;
            }
            let v: Vec<Rat<I>> = (0..n).map(|k| Ratio::new(s.v[k][i].clone(), d.clone())).collect();
            gens.push((d, reduce_mod1(&v)));
        }
        gens.sort();
        let mut g = Self { gram: l.gram().clone(), orders: Vec::new(), generators: Vec::new(), q_values: Vec::new() };
        for (d, v) in gens {
            g.q_values.push(g.q(&v));
            g.orders.push(d);
            g.generators.push(v);
        }
        Ok(g)
    }

    pub fn size(&self) -> I {
        self.orders.iter().fold(I::one(), |a, b| a * b.clone())
    }

    /// Number of cyclic factors.
    pub fn length(&self) -> usize {
        self.orders.len()
    }

    pub fn q(&self, x: &[Rat<I>]) -> Rat<I> {
        rat_mod(&matrix::bilinear(&self.gram, x, x), &int(2))
    }

    pub fn b(&self, x: &[Rat<I>], y: &[Rat<I>]) -> Rat<I> {
        rat_mod(&matrix::bilinear(&self.gram, x, y), &I::one())
    }

    /// Every element, as reduced coordinate vectors.
    pub fn elements(&self) -> Vec<Vec<Rat<I>>> {
        let n = self.gram.len();
        let mut out = vec![vec![Rat::<I>::zero(); n]];
        for (g, d) in self.generators.iter().zip(&self.orders) {
            let d = d.to_usize().expect("cyclic factor too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * d);
            for x in &out {
                let mut cur = x.clone();
                for _ in 0..d {
                    next.push(cur.clone());
                    cur = reduce_mod1(&cur.iter().zip(g).map(|(a, b)| a.clone() + b.clone()).collect::<Vec<_>>());
                }
            }
            out = next;
        }
        out
    }

    pub fn summary(&self) -> DiscriminantSummary {
        DiscriminantSummary {
            orders: self.orders.iter().map(|o| o.to_string()).collect(),
            generators: self.generators.iter().map(|g| g.iter().map(|c| c.to_string()).collect()).collect(),
            q_values: self.q_values.iter().map(|c| c.to_string()).collect(),
        }
    }

    /// Exponent of 2 when the group is (Z/2)^a.
    pub fn two_rank(&self) -> Option<usize> {
        let two = int::<I>(2);
        if self.orders.iter().all(|o| *o == two) {
            Some(self.orders.len())
        } else {
            None
        }
    }

    pub fn is_negative_free(&self) -> bool {
        self.q_values.iter().all(|q| !q.is_negative())
    }
}
