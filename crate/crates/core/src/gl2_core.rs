//! Dense element tables for GL2(F_p) at small p: multiplication, inverses,
//! conjugation, conjugacy classes, and a subgroup-lattice walk up to
//! conjugacy. Sized for p <= 7 (|GL2(F_7)| = 2016).

use crate::primes::inv_mod;

pub type Mat = [u64; 4];

pub fn mat_mul(p: u64, a: Mat, b: Mat) -> Mat {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

pub fn mat_det(p: u64, m: Mat) -> u64 {
    (m[0] * m[3] % p + p - m[1] * m[2] % p) % p
}

pub fn mat_inv(p: u64, m: Mat) -> Mat {
    let di = inv_mod(mat_det(p, m), p);
    [
        m[3] * di % p,
        (p - m[1] % p) % p * di % p,
        (p - m[2] % p) % p * di % p,
        m[0] * di % p,
    ]
}

pub fn mat_trace(p: u64, m: Mat) -> u64 {
    (m[0] + m[3]) % p
}

/// All of SL2(F_p) in a fixed enumeration order.
pub fn sl2_elements(p: u64) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d % p + p - b * c % p) % p == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

/// Precomputed tables for GL2(F_p).
pub struct Gl2Table {
    pub p: u64,
    pub n: usize,
    pub els: Vec<Mat>,
    pub ident: u16,
    pub mul: Vec<u16>,   // n * n
    pub conj: Vec<u16>,  // n * n: conj[g*n + x] = g x g^-1
    pub det: Vec<u16>,   // n
    pub trace: Vec<u16>, // n
    pub classes: Vec<Vec<u16>>,
}

impl Gl2Table {
    pub fn build(p: u64) -> Gl2Table {
        let mut els = Vec::new();
        let mut index = vec![u16::MAX; (p * p * p * p) as usize];
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        if !(a * d % p + p - b * c % p).is_multiple_of(p) {
                            let key = ((a * p + b) * p + c) * p + d;
                            index[key as usize] = els.len() as u16;
                            els.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        let n = els.len();
        let idx_of = |m: Mat| -> u16 {
            let key = ((m[0] * p + m[1]) * p + m[2]) * p + m[3];
            index[key as usize]
        };
        let mut mul = vec![0u16; n * n];
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                mul[i * n + j] = idx_of(mat_mul(p, a, b));
            }
        }
        let mut inv = vec![0u16; n];
        let mut det = vec![0u16; n];
        let mut trace = vec![0u16; n];
        let mut ident = 0u16;
        for (i, &m) in els.iter().enumerate() {
            inv[i] = idx_of(mat_inv(p, m));
            det[i] = mat_det(p, m) as u16;
            trace[i] = mat_trace(p, m) as u16;
            if m == [1, 0, 0, 1] {
                ident = i as u16;
            }
        }
        let mut conj = vec![0u16; n * n];
        for g in 0..n {
            for x in 0..n {
                let gx = mul[g * n + x] as usize;
                conj[g * n + x] = mul[gx * n + inv[g] as usize];
            }
        }
        // conjugacy classes
        let mut class_of = vec![u16::MAX; n];
        let mut classes: Vec<Vec<u16>> = Vec::new();
        for x in 0..n {
            if class_of[x] != u16::MAX {
                continue;
            }
            let cid = classes.len() as u16;
            let mut members = Vec::new();
            for g in 0..n {
                let y = conj[g * n + x] as usize;
                if class_of[y] == u16::MAX {
                    class_of[y] = cid;
                    members.push(y as u16);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        Gl2Table {
            p,
            n,
            els,
            ident,
            mul,
            conj,
            det,
            trace,
            classes,
        }
    }

    pub fn mul_i(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.n + b as usize]
    }

    pub fn conj_i(&self, g: u16, x: u16) -> u16 {
        self.conj[g as usize * self.n + x as usize]
    }
}

/// Fixed-width bitset over group element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    pub words: Vec<u64>,
}

impl ElemSet {
    pub fn new(n: usize) -> ElemSet {
        ElemSet {
            words: vec![0u64; n.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: u16) -> bool {
        let w = i as usize / 64;
        let bit = 1u64 << (i as usize % 64);
        let fresh = self.words[w] & bit == 0;
        self.words[w] |= bit;
        fresh
    }

    pub fn contains(&self, i: u16) -> bool {
        self.words[i as usize / 64] & (1u64 << (i as usize % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u16> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter_map(move |b| {
                if w & (1 << b) != 0 {
                    Some((wi * 64 + b) as u16)
                } else {
                    None
                }
            })
        })
    }
}

/// Closure of a generating set under the group operation. Returns `None`
/// once the subgroup size exceeds `cap` (then it must be the whole group,
/// proper subgroups having index >= 2).
pub fn closure(table: &Gl2Table, gens: &[u16], cap: usize) -> Option<ElemSet> {
    let mut set = ElemSet::new(table.n);
    let mut list: Vec<u16> = Vec::new();
    set.insert(table.ident);
    list.push(table.ident);
    let mut queue: Vec<u16> = Vec::new();
    for &g in gens {
        if set.insert(g) {
            list.push(g);
            queue.push(g);
        }
    }
    while let Some(x) = queue.pop() {
        let mut i = 0;
        while i < list.len() {
            let y = list[i];
            for z in [table.mul_i(x, y), table.mul_i(y, x)] {
                if set.insert(z) {
                    if list.len() + 1 > cap {
                        return None;
                    }
                    list.push(z);
                    queue.push(z);
                }
            }
            i += 1;
        }
    }
    Some(set)
}

/// Lexicographically minimal conjugate of the set: a canonical form for the
/// conjugacy class of subgroups.
pub fn canonical_conjugate(table: &Gl2Table, set: &ElemSet) -> ElemSet {
    let members: Vec<u16> = set.iter().collect();
    let mut best: Option<ElemSet> = None;
    for g in 0..table.n as u16 {
        let mut img = ElemSet::new(table.n);
        for &x in &members {
            img.insert(table.conj_i(g, x));
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    }
    best.unwrap()
}

/// Every subgroup of GL2(F_p) with order <= |G|/2, one representative per
/// conjugacy class, found by joining known subgroups with new generators.
pub fn proper_subgroup_classes(table: &Gl2Table) -> Vec<ElemSet> {
    let n = table.n;
    let cap = n / 2;
    let mut seen = std::collections::HashSet::new();
    let mut seen_raw = std::collections::HashSet::new();
    let mut reps: Vec<ElemSet> = Vec::new();
    let mut queue: Vec<ElemSet> = Vec::new();
    let admit = |set: ElemSet,
                     seen: &mut std::collections::HashSet<ElemSet>,
                     seen_raw: &mut std::collections::HashSet<ElemSet>,
                     reps: &mut Vec<ElemSet>,
                     queue: &mut Vec<ElemSet>| {
        if !seen_raw.insert(set.clone()) {
            return;
        }
        let canon = canonical_conjugate(table, &set);
        if seen.insert(canon.clone()) {
            reps.push(canon.clone());
            queue.push(canon);
        }
    };

    // cyclic seeds, one per conjugacy class of elements
    for class in &table.classes {
        let g = class[0];
        if let Some(set) = closure(table, &[g], cap) {
            admit(set, &mut seen, &mut seen_raw, &mut reps, &mut queue);
        }
    }

    let mut qi = 0;
    while qi < queue.len() {
        let h = queue[qi].clone();
        qi += 1;
        let members: Vec<u16> = h.iter().collect();
        // normalizer of h
        let mut normalizer: Vec<u16> = Vec::new();
        for g in 0..n as u16 {
            let mut img = ElemSet::new(n);
            for &x in &members {
                img.insert(table.conj_i(g, x));
            }
            if img == h {
                normalizer.push(g);
            }
        }
        // candidate generators up to normalizer-conjugation
        let mut visited = h.clone();
        for x in 0..n as u16 {
            if visited.contains(x) {
                continue;
            }
            for &g in &normalizer {
                visited.insert(table.conj_i(g, x));
            }
            let mut gens = members.clone();
            gens.push(x);
            if let Some(set) = closure(table, &gens, cap) {
                admit(set, &mut seen, &mut seen_raw, &mut reps, &mut queue);
            }
        }
    }
    reps.sort_by_key(|s| (s.len(), s.words.clone()));
    reps
}

/// Index of the normalizer of `set`, i.e. the number of conjugates of the
/// subgroup. Used to cross-check lattice completeness against Sylow theory.
pub fn conjugate_count(table: &Gl2Table, set: &ElemSet) -> usize {
    let members: Vec<u16> = set.iter().collect();
    let mut normalizer = 0usize;
    for g in 0..table.n as u16 {
        let mut img = ElemSet::new(table.n);
        for &x in &members {
            img.insert(table.conj_i(g, x));
        }
        if img == *set {
            normalizer += 1;
        }
    }
    table.n / normalizer
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes() {
        let t5 = Gl2Table::build(5);
        assert_eq!(t5.n, 480);
        let t3 = Gl2Table::build(3);
        assert_eq!(t3.n, 48);
        assert_eq!(sl2_elements(5).len(), 120);
        assert_eq!(sl2_elements(7).len(), 336);
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let t = Gl2Table::build(3);
        let s = closure(&t, &[t.ident], t.n / 2).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn closure_bails_on_whole_group() {
        let t = Gl2Table::build(3);
        // generators of GL2(F_3): [1,1;0,1] and a det-generator [2,0;0,1]
        let find = |m: Mat| t.els.iter().position(|&e| e == m).unwrap() as u16;
        let a = find([1, 1, 0, 1]);
        let b = find([2, 0, 0, 1]);
        let c = find([0, 1, 2, 0]);
        assert!(closure(&t, &[a, b, c], t.n / 2).is_none());
    }

    #[test]
    fn canonical_form_conjugation_invariant() {
        let t = Gl2Table::build(3);
        let find = |m: Mat| t.els.iter().position(|&e| e == m).unwrap() as u16;
        let x = find([1, 1, 0, 1]);
        let s = closure(&t, &[x], t.n / 2).unwrap();
        let canon = canonical_conjugate(&t, &s);
        for g in [3u16, 17, 40] {
            let mut img = ElemSet::new(t.n);
            for m in s.iter() {
                img.insert(t.conj_i(g, m));
            }
            assert_eq!(canonical_conjugate(&t, &img), canon);
        }
    }

    #[test]
    fn lattice_counts_gl2_f3() {
        // |GL2(F_3)| = 48; subgroup classes of order <= 24
        let t = Gl2Table::build(3);
        let reps = proper_subgroup_classes(&t);
        // every rep is closed and proper
        for r in &reps {
            assert!(r.len() <= 24);
            assert_eq!(48 % r.len(), 0, "Lagrange violated: {}", r.len());
        }
        // the trivial subgroup and the center are present
        assert!(reps.iter().any(|r| r.len() == 1));
        assert!(reps.iter().any(|r| r.len() == 2));
    }
}
