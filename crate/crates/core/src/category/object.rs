use std::collections::BTreeMap;
use std::sync::Arc;

use super::space::FiniteSpace;
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    /// Finite-dimensional vector spaces.
    FinVect,
    /// Presheaves of finite-dimensional vector spaces on a finite space.
    Presheaf(FiniteSpace),
}

/// One of the two computable abelian symmetric monoidal categories.
///
/// Both are handled uniformly as families of vector spaces indexed by
/// "sites": a single site for `FinVect`, one site per open for presheaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CatInstance {
    field: Field,
    kind: InstanceKind,
    pairs: Vec<(usize, usize)>,
}

impl CatInstance {
    pub fn finvect(field: Field) -> Arc<CatInstance> {
        Arc::new(CatInstance {
            field,
            kind: InstanceKind::FinVect,
            pairs: Vec::new(),
        })
    }

    pub fn presheaf(field: Field, space: FiniteSpace) -> Arc<CatInstance> {
        let pairs = space.strict_pairs();
        Arc::new(CatInstance {
            field,
            kind: InstanceKind::Presheaf(space),
            pairs,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn kind(&self) -> &InstanceKind {
        &self.kind
    }

    pub fn space(&self) -> Option<&FiniteSpace> {
        match &self.kind {
            InstanceKind::Presheaf(s) => Some(s),
            InstanceKind::FinVect => None,
        }
    }

    pub fn is_presheaf(&self) -> bool {
        matches!(self.kind, InstanceKind::Presheaf(_))
    }

    pub fn sites(&self) -> usize {
        self.space().map_or(1, FiniteSpace::len)
    }

    /// Site of the whole space: global sections live here.
    pub fn top(&self) -> usize {
        self.space().map_or(0, FiniteSpace::top)
    }

    /// Site of the empty open, where every object vanishes.
    pub fn bottom(&self) -> Option<usize> {
        self.space().map(FiniteSpace::bottom)
    }

    /// Strict inclusions `(smaller, larger)` carrying restriction maps.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn site_name(&self, site: usize) -> String {
        match &self.kind {
            InstanceKind::FinVect => "*".to_string(),
            InstanceKind::Presheaf(s) => s.names()[site].clone(),
        }
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        match &self.kind {
            InstanceKind::FinVect => a == b,
            InstanceKind::Presheaf(s) => s.leq(a, b),
        }
    }
}

/// An object: one vector space per site, and for presheaves a restriction
/// `M(u) -> M(v)` for every strict inclusion `v ⊂ u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CObject {
    inst: Arc<CatInstance>,
    dims: Vec<usize>,
    res: BTreeMap<(usize, usize), Matrix>,
}

impl CObject {
    /// Validates shapes, the vanishing at the empty open, and functoriality.
    pub fn new(
        inst: Arc<CatInstance>,
        dims: Vec<usize>,
        res: BTreeMap<(usize, usize), Matrix>,
    ) -> Result<CObject> {
        if dims.len() != inst.sites() {
            return Err(Error::input(format!(
                "object has {} site dimensions, instance has {} sites",
                dims.len(),
                inst.sites()
            )));
        }
        if let Some(b) = inst.bottom() {
            if dims[b] != 0 {
                return Err(Error::input(format!(
                    "presheaf must vanish on the empty open `{}`",
                    inst.site_name(b)
                )));
            }
        }
        let field = inst.field();
        let mut full = BTreeMap::new();
        for &(v, u) in inst.pairs() {
            let m = match res.get(&(v, u)) {
                Some(m) => m.clone(),
                None if dims[v] == 0 || dims[u] == 0 => Matrix::zeros(field, dims[v], dims[u]),
                None => {
                    return Err(Error::input(format!(
                        "missing restriction {} -> {}",
                        inst.site_name(u),
                        inst.site_name(v)
                    )))
                }
            };
            if m.shape() != (dims[v], dims[u]) || m.field() != field {
                return Err(Error::input(format!(
                    "restriction {} -> {} has shape {:?}, expected {:?}",
                    inst.site_name(u),
                    inst.site_name(v),
                    m.shape(),
                    (dims[v], dims[u])
                )));
            }
            full.insert((v, u), m);
        }
        for key in res.keys() {
            if !full.contains_key(key) {
                return Err(Error::input(format!(
                    "restriction {} -> {} is not along an inclusion",
                    inst.site_name(key.1),
                    inst.site_name(key.0)
                )));
            }
        }
        let obj = CObject {
            inst,
            dims,
            res: full,
        };
        obj.check_functoriality()?;
        Ok(obj)
    }

    fn check_functoriality(&self) -> Result<()> {
        for &(w, v) in self.inst.pairs() {
            for &(v2, u) in self.inst.pairs() {
                if v2 != v {
                    continue;
                }
                let direct = &self.res[&(w, u)];
                let composite = self.res[&(w, v)].mul(&self.res[&(v, u)]);
                if *direct != composite {
                    return Err(Error::input(format!(
                        "restrictions are not functorial on {} ⊂ {} ⊂ {}",
                        self.inst.site_name(w),
                        self.inst.site_name(v),
                        self.inst.site_name(u)
                    )));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(
        inst: Arc<CatInstance>,
        dims: Vec<usize>,
        res: BTreeMap<(usize, usize), Matrix>,
    ) -> CObject {
        let obj = CObject { inst, dims, res };
        debug_assert!(obj.check_functoriality().is_ok());
        obj
    }

    pub fn finvect(inst: Arc<CatInstance>, dim: usize) -> CObject {
        assert!(!inst.is_presheaf());
        CObject {
            inst,
            dims: vec![dim],
            res: BTreeMap::new(),
        }
    }

    pub fn zero(inst: &Arc<CatInstance>) -> CObject {
        let field = inst.field();
        let dims = vec![0; inst.sites()];
        let res = inst
            .pairs()
            .iter()
            .map(|&p| (p, Matrix::zeros(field, 0, 0)))
            .collect();
        CObject {
            inst: inst.clone(),
            dims,
            res,
        }
    }

    /// The monoidal unit: the base field at every nonempty open, identity
    /// restrictions.
    pub fn unit(inst: &Arc<CatInstance>) -> CObject {
        let field = inst.field();
        let bottom = inst.bottom();
        let dims: Vec<usize> = (0..inst.sites())
            .map(|s| if Some(s) == bottom { 0 } else { 1 })
            .collect();
        let res = inst
            .pairs()
            .iter()
            .map(|&(v, u)| {
                let m = if dims[v] == 1 {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[v], dims[u])
                };
                ((v, u), m)
            })
            .collect();
        CObject {
            inst: inst.clone(),
            dims,
            res,
        }
    }

    /// Constant presheaf with identity restrictions (or a plain space).
    pub fn constant(inst: &Arc<CatInstance>, dim: usize) -> CObject {
        let field = inst.field();
        let bottom = inst.bottom();
        let dims: Vec<usize> = (0..inst.sites())
            .map(|s| if Some(s) == bottom { 0 } else { dim })
            .collect();
        let res = inst
            .pairs()
            .iter()
            .map(|&(v, u)| {
                let m = if dims[v] == dim {
                    Matrix::identity(field, dim)
                } else {
                    Matrix::zeros(field, dims[v], dims[u])
                };
                ((v, u), m)
            })
            .collect();
        CObject {
            inst: inst.clone(),
            dims,
            res,
        }
    }

    pub fn instance(&self) -> &Arc<CatInstance> {
        &self.inst
    }

    pub fn field(&self) -> Field {
        self.inst.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    /// Dimension of the sections over the whole space.
    pub fn global_dim(&self) -> usize {
        self.dims[self.inst.top()]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Restriction `M(u) -> M(v)` for `v ⊆ u`.
    pub fn restriction(&self, v: usize, u: usize) -> Matrix {
        if v == u {
            Matrix::identity(self.field(), self.dims[v])
        } else {
            self.res[&(v, u)].clone()
        }
    }

    pub fn restrictions(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.res
    }

    pub fn same_instance(&self, other: &CObject) -> bool {
        Arc::ptr_eq(&self.inst, &other.inst) || self.inst == other.inst
    }
}

/// A morphism: one matrix per site, commuting with restrictions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CMorphism {
    source: CObject,
    target: CObject,
    comps: Vec<Matrix>,
}

impl CMorphism {
    /// Validates shapes and naturality.
    pub fn new(source: CObject, target: CObject, comps: Vec<Matrix>) -> Result<CMorphism> {
        if !source.same_instance(&target) {
            return Err(Error::input("morphism between objects of different instances"));
        }
        if comps.len() != source.inst.sites() {
            return Err(Error::input(format!(
                "morphism has {} components, instance has {} sites",
                comps.len(),
                source.inst.sites()
            )));
        }
        for (s, c) in comps.iter().enumerate() {
            if c.shape() != (target.dims[s], source.dims[s]) || c.field() != source.field() {
                return Err(Error::input(format!(
                    "component at `{}` has shape {:?}, expected {:?}",
                    source.inst.site_name(s),
                    c.shape(),
                    (target.dims[s], source.dims[s])
                )));
            }
        }
        let m = CMorphism {
            source,
            target,
            comps,
        };
        if let Some((v, u)) = m.naturality_failure() {
            return Err(Error::input(format!(
                "morphism does not commute with restriction {} -> {}",
                m.source.inst.site_name(u),
                m.source.inst.site_name(v)
            )));
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: CObject, target: CObject, comps: Vec<Matrix>) -> CMorphism {
        let m = CMorphism {
            source,
            target,
            comps,
        };
        debug_assert!(
            m.naturality_failure().is_none(),
            "unnatural morphism built internally"
        );
        m
    }

    /// First strict pair where the commuting square fails.
    pub fn naturality_failure(&self) -> Option<(usize, usize)> {
        self.source.inst.pairs().iter().copied().find(|&(v, u)| {
            let lhs = self.target.restriction(v, u).mul(&self.comps[u]);
            let rhs = self.comps[v].mul(&self.source.restriction(v, u));
            lhs != rhs
        })
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_failure().is_none()
    }

    pub fn identity(x: &CObject) -> CMorphism {
        let comps = x.dims.iter().map(|&d| Matrix::identity(x.field(), d)).collect();
        CMorphism {
            source: x.clone(),
            target: x.clone(),
            comps,
        }
    }

    /// Identity components between two objects with equal dimensions, such
    /// as `1 ⊗ A` and `A`.
    pub(crate) fn identity_between(source: CObject, target: CObject) -> CMorphism {
        let field = source.field();
        let comps = source
            .dims()
            .iter()
            .map(|&d| Matrix::identity(field, d))
            .collect();
        CMorphism::new_unchecked(source, target, comps)
    }

    pub fn zero(source: &CObject, target: &CObject) -> CMorphism {
        let comps = (0..source.inst.sites())
            .map(|s| Matrix::zeros(source.field(), target.dims[s], source.dims[s]))
            .collect();
        CMorphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    /// FinVect convenience: a single matrix between spaces.
    pub fn finvect(source: &CObject, target: &CObject, m: Matrix) -> Result<CMorphism> {
        CMorphism::new(source.clone(), target.clone(), vec![m])
    }

    pub fn source(&self) -> &CObject {
        &self.source
    }

    pub fn target(&self) -> &CObject {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.comps
    }

    pub fn component(&self, site: usize) -> &Matrix {
        &self.comps[site]
    }

    pub fn field(&self) -> Field {
        self.source.field()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CMorphism) -> CMorphism {
        assert_eq!(
            other.target.dims, self.source.dims,
            "composing morphisms with mismatched objects"
        );
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.mul(b))
            .collect();
        CMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn add(&self, other: &CMorphism) -> CMorphism {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        CMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn sub(&self, other: &CMorphism) -> CMorphism {
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        CMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    pub fn scale(&self, s: &Scalar) -> CMorphism {
        let comps = self.comps.iter().map(|a| a.scale(s)).collect();
        CMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            comps,
        }
    }

    /// Same components viewed between other objects with equal dimensions
    /// (used when two presentations of an object coincide on the nose).
    pub fn retarget(&self, source: &CObject, target: &CObject) -> Result<CMorphism> {
        CMorphism::new(source.clone(), target.clone(), self.comps.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.comps.iter().all(Matrix::is_injective)
    }

    pub fn is_epi(&self) -> bool {
        self.comps.iter().all(Matrix::is_surjective)
    }

    pub fn is_iso(&self) -> bool {
        self.comps.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<CMorphism> {
        let comps = self
            .comps
            .iter()
            .map(Matrix::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(CMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            comps,
        })
    }

    /// Rank of every component.
    pub fn ranks(&self) -> Vec<usize> {
        self.comps.iter().map(Matrix::rank).collect()
    }

    /// All components flattened into one vector, site by site.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.comps.iter().flat_map(Matrix::flatten).collect()
    }

    /// Inverse of [`CMorphism::flatten`].
    pub fn from_flat(source: &CObject, target: &CObject, flat: &[Scalar]) -> CMorphism {
        let mut offset = 0;
        let comps = (0..source.inst.sites())
            .map(|s| {
                let (r, c) = (target.dims[s], source.dims[s]);
                let m = Matrix::from_vec(source.field(), r, c, flat[offset..offset + r * c].to_vec());
                offset += r * c;
                m
            })
            .collect();
        assert_eq!(offset, flat.len());
        CMorphism {
            source: source.clone(),
            target: target.clone(),
            comps,
        }
    }

    /// Where two parallel morphisms first differ: `(site, source basis index)`.
    pub fn first_difference(&self, other: &CMorphism) -> Option<(usize, usize)> {
        for s in 0..self.comps.len() {
            let (a, b) = (&self.comps[s], &other.comps[s]);
            for c in 0..a.cols() {
                if a.column(c) != b.column(c) {
                    return Some((s, c));
                }
            }
        }
        None
    }
}
