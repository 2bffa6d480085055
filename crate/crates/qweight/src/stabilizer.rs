//! Stabilizer groups, code projectors, centralizers, and shadow sets.
//!
//! Validation builds the full group closure (2^m elements for m independent
//! generators), which simultaneously checks independence and detects `-I`.
//! At the scale this crate targets (n <= 9 sites) closure enumeration is
//! cheaper and simpler than symplectic rank computations.

use std::collections::{HashMap, HashSet};


use crate::error::{Error, Result};
use crate::pauli::{PauliOp, PauliString};
use crate::tensor::{Operator, SubsystemShape, MATRIX_ENTRY_CAP};

/// Brute-force Pauli enumeration (4^n words) is capped at this many sites.
pub const ENUMERATION_SITE_CAP: usize = 9;

/// A validated stabilizer group on `n` qubits.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    generators: Vec<PauliString>,
    elements: Vec<PauliString>,
    n: usize,
}

impl StabilizerGroup {
    /// Validate a generator list: uniform length, pairwise commuting,
    /// independent, and `-I` not in the generated group.
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::argument("generator list is empty"))?;
        let n = first.n();
        if let Some(bad) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::validation(format!(
                "generator {bad} has {} sites, expected {n}",
                bad.n()
            )));
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_with(b) {
                    return Err(Error::Anticommuting {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
            }
        }
        let elements = closure(&generators, n)?;
        let expected = 1usize << generators.len();
        if elements.len() != expected {
            return Err(Error::DependentGenerators {
                expected,
                actual: elements.len(),
            });
        }
        Ok(StabilizerGroup {
            generators,
            elements,
            n,
        })
    }

    /// Parse a stabilizer file: one generator per line, optional sign prefix,
    /// `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut n = None;
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let expected = match n {
                Some(n) => n,
                None => {
                    let probe = PauliString::parse_any_len(line)?;
                    n = Some(probe.n());
                    probe.n()
                }
            };
            gens.push(PauliString::parse(line, expected)?);
        }
        StabilizerGroup::new(gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Logical qubit count `k = n - m`.
    pub fn logical_qubits(&self) -> usize {
        self.n - self.generators.len()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// All `2^m` group elements, phases included.
    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    /// Phase-free images `f(G)` of the group elements.
    pub fn group_words(&self) -> Vec<PauliString> {
        self.elements.iter().map(|e| e.phase_free()).collect()
    }

    /// Phase-free centralizer `f(C(G))`: all Pauli words commuting with every
    /// generator. Brute-forces the 4^n words; capped at
    /// [`ENUMERATION_SITE_CAP`] sites.
    pub fn centralizer(&self) -> Result<Vec<PauliString>> {
        centralizer_of(&self.generators, self.n)
    }

    /// The shadow set: `f(C(G))` when every group element has even weight,
    /// otherwise `f(C(G_0)) \ f(C(G))` where `G_0` is the even-weight
    /// subgroup of `G`.
    pub fn shadow_set(&self) -> Result<Vec<PauliString>> {
        let all_even = self.elements.iter().all(|e| e.weight() % 2 == 0);
        if all_even {
            return self.centralizer();
        }
        // G_0 is the kernel of the weight-parity homomorphism. With the odd
        // generators o_1..o_r and even generators e_1..e_s, it is generated
        // by {e_i} together with {o_1 o_j : j >= 2}.
        let (odd, even): (Vec<_>, Vec<_>) = self
            .generators
            .iter()
            .cloned()
            .partition(|g| g.weight() % 2 == 1);
        let mut kernel_gens = even;
        for other in &odd[1..] {
            kernel_gens.push(odd[0].mul(other));
        }
        let in_cg: HashSet<usize> = self
            .centralizer()?
            .iter()
            .map(|p| p.word_index())
            .collect();
        let c_g0 = centralizer_of(&kernel_gens, self.n)?;
        Ok(c_g0
            .into_iter()
            .filter(|p| !in_cg.contains(&p.word_index()))
            .collect())
    }

    /// Code space data: projector `Pi = prod_i (I + g_i)/2`, dimension
    /// `K = 2^k`, and normalized projector `rho = Pi / K`.
    ///
    /// The projector is assembled as the group average `(1/2^m) sum_g g`,
    /// which is the expanded form of the generator product and costs
    /// `O(2^m 2^n)` instead of m dense matrix products.
    pub fn code_projector(&self) -> Result<CodeSpace> {
        let dim = 1usize << self.n;
        if dim.saturating_mul(dim) > MATRIX_ENTRY_CAP {
            return Err(Error::size_cap(format!(
                "projector for n = {} exceeds {MATRIX_ENTRY_CAP} entries",
                self.n
            )));
        }
        let mut projector = Operator::zeros(dim, dim);
        let scale = 1.0 / self.elements.len() as f64;
        for element in &self.elements {
            let act = element.row_action();
            for r in 0..dim {
                projector[(r, r ^ act.flip)] += act.entry(r) * scale;
            }
        }
        let k_dim = 1usize << self.logical_qubits();
        let rho = projector.map(|z| z / k_dim as f64);
        Ok(CodeSpace {
            shape: SubsystemShape::qubits(self.n),
            dim: k_dim,
            projector,
            rho,
        })
    }
}

/// A stabilizer code space: projector, normalized projector, and dimension.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    pub shape: SubsystemShape,
    /// Code dimension `K`.
    pub dim: usize,
    pub projector: Operator,
    pub rho: Operator,
}

fn closure(generators: &[PauliString], n: usize) -> Result<Vec<PauliString>> {
    let mut seen: HashMap<usize, PauliString> = HashMap::new();
    let identity = PauliString::identity(n);
    seen.insert(identity.word_index(), identity.clone());
    let mut frontier = vec![identity];
    while let Some(current) = frontier.pop() {
        for g in generators {
            let product = current.mul(g);
            match seen.get(&product.word_index()) {
                Some(existing) => {
                    if existing.phase_pow() != product.phase_pow() {
                        return Err(Error::MinusIdentity);
                    }
                }
                None => {
                    seen.insert(product.word_index(), product.clone());
                    frontier.push(product);
                }
            }
        }
    }
    let mut elements: Vec<PauliString> = seen.into_values().collect();
    elements.sort_by_key(|e| e.word_index());
    Ok(elements)
}

fn centralizer_of(generators: &[PauliString], n: usize) -> Result<Vec<PauliString>> {
    if n > ENUMERATION_SITE_CAP {
        return Err(Error::size_cap(format!(
            "centralizer enumeration capped at {ENUMERATION_SITE_CAP} sites, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut word = vec![PauliOp::I; n];
    for index in 0..(1usize << (2 * n)) {
        for (s, op) in word.iter_mut().enumerate() {
            *op = PauliOp::from_index(index >> (2 * (n - 1 - s)));
        }
        let commutes = generators.iter().all(|g| {
            word.iter()
                .zip(g.ops())
                .filter(|(w, g)| !w.is_identity() && !g.is_identity() && w != g)
                .count()
                % 2
                == 0
        });
        if commutes {
            out.push(PauliString::new(word.clone(), 0).expect("nonempty word"));
        }
    }
    Ok(out)
}

/// Weight histogram of a list of Pauli words (index = weight).
pub fn weight_distribution(words: &[PauliString], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    for w in words {
        counts[w.weight()] += 1;
    }
    counts
}

/// Built-in reference codes: `"five-qubit"` ((5,2,3)), `"steane"` ((7,2,3)),
/// and `"shor"` ((9,2,3)).
pub fn named_code(name: &str) -> Option<StabilizerGroup> {
    let gens: &[&str] = match name {
        "five-qubit" => &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        "steane" => &[
            "IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ",
        ],
        "shor" => &[
            "ZZIIIIIII",
            "ZIZIIIIII",
            "IIIZZIIII",
            "IIIZIZIII",
            "IIIIIIZZI",
            "IIIIIIZIZ",
            "XXXXXXIII",
            "XXXIIIXXX",
        ],
        _ => return None,
    };
    let n = gens[0].len();
    let parsed = gens
        .iter()
        .map(|g| PauliString::parse(g, n).expect("built-in generator"))
        .collect();
    Some(StabilizerGroup::new(parsed).expect("built-in code validates"))
}

/// Names accepted by [`named_code`].
pub const NAMED_CODES: [&str; 3] = ["five-qubit", "steane", "shor"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::trace_product;

    fn five_qubit() -> StabilizerGroup {
        named_code("five-qubit").unwrap()
    }

    #[test]
    fn five_qubit_group_validates() {
        let g = five_qubit();
        assert_eq!(g.n(), 5);
        assert_eq!(g.logical_qubits(), 1);
        assert_eq!(g.elements().len(), 16);
    }

    #[test]
    fn bell_pair_group() {
        let g =
            StabilizerGroup::new(vec![
                PauliString::parse("XX", 2).unwrap(),
                PauliString::parse("ZZ", 2).unwrap(),
            ])
            .unwrap();
        assert_eq!(g.logical_qubits(), 0);
    }

    #[test]
    fn anticommuting_generators_are_rejected() {
        let err = StabilizerGroup::new(vec![
            PauliString::parse("XI", 2).unwrap(),
            PauliString::parse("ZI", 2).unwrap(),
        ])
        .unwrap_err();
        match err {
            Error::Anticommuting { a, b } => {
                assert_eq!(a, "XI");
                assert_eq!(b, "ZI");
            }
            other => panic!("expected anticommuting error, got {other:?}"),
        }
    }

    #[test]
    fn minus_identity_is_rejected() {
        // XX * YY = -ZZ, so the closure revisits ZZ with the opposite sign:
        // the generated group contains -I.
        let err = StabilizerGroup::new(vec![
            PauliString::parse("XX", 2).unwrap(),
            PauliString::parse("YY", 2).unwrap(),
            PauliString::parse("ZZ", 2).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::MinusIdentity));
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let err = StabilizerGroup::new(vec![
            PauliString::parse("XX", 2).unwrap(),
            PauliString::parse("XX", 2).unwrap(),
        ])
        .unwrap_err();
        assert!(matches!(
            err,
            Error::DependentGenerators {
                expected: 4,
                actual: 2
            }
        ));
    }

    #[test]
    fn five_qubit_group_weights_match_quadratic_enumerator() {
        // f(G) has weight distribution (1,0,0,0,15,0); f(C(G)) doubles the
        // B enumerator: (1,0,0,30,15,18).
        let g = five_qubit();
        let counts = weight_distribution(&g.group_words(), 5);
        assert_eq!(counts, vec![1, 0, 0, 0, 15, 0]);
        let cent = g.centralizer().unwrap();
        assert_eq!(cent.len(), 64);
        let counts = weight_distribution(&cent, 5);
        assert_eq!(counts, vec![1, 0, 0, 30, 15, 18]);
        let min_weight = cent
            .iter()
            .filter(|p| !p.is_identity_word())
            .map(|p| p.weight())
            .min()
            .unwrap();
        assert_eq!(min_weight, 3);
    }

    #[test]
    fn shadow_set_even_branch_is_centralizer() {
        let g = StabilizerGroup::new(vec![PauliString::parse("ZZ", 2).unwrap()]).unwrap();
        let mut shadow: Vec<String> = g.shadow_set().unwrap().iter().map(|p| p.to_string()).collect();
        let mut cent: Vec<String> = g.centralizer().unwrap().iter().map(|p| p.to_string()).collect();
        shadow.sort();
        cent.sort();
        assert_eq!(shadow, cent);
    }

    #[test]
    fn shadow_set_odd_branch() {
        // G = {I, Y} on one qubit: C(G) = {I, Y}, G_0 = {I}, so the shadow is
        // {X, Z}.
        let g = StabilizerGroup::new(vec![PauliString::parse("Y", 1).unwrap()]).unwrap();
        let mut shadow: Vec<String> = g.shadow_set().unwrap().iter().map(|p| p.to_string()).collect();
        shadow.sort();
        assert_eq!(shadow, vec!["X".to_string(), "Z".to_string()]);
    }

    #[test]
    fn code_projector_five_qubit() {
        let code = five_qubit().code_projector().unwrap();
        assert_eq!(code.dim, 2);
        assert!((code.projector.trace().re - 2.0).abs() < 1e-9);
        // Projector is idempotent and absorbs every generator.
        let sq = &code.projector * &code.projector;
        assert!((&sq - &code.projector).iter().all(|z| z.norm() < 1e-9));
        for g in five_qubit().generators() {
            let gm = g.to_matrix().unwrap();
            let prod = &code.projector * &gm;
            assert!((&prod - &code.projector).iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn code_projector_matches_generator_product_form() {
        let group = five_qubit();
        let dim = 1 << 5;
        let mut product = crate::tensor::identity(dim);
        for g in group.generators() {
            let factor = (crate::tensor::identity(dim) + g.to_matrix().unwrap()).map(|z| z * 0.5);
            product = product * factor;
        }
        let code = group.code_projector().unwrap();
        assert!((&code.projector - &product).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn repetition_code_projector() {
        let g = StabilizerGroup::new(vec![PauliString::parse("ZZ", 2).unwrap()]).unwrap();
        let code = g.code_projector().unwrap();
        assert_eq!(code.dim, 2);
        // Projects onto span{|00>, |11>}.
        for (i, expect) in [(0usize, 1.0), (1, 0.0), (2, 0.0), (3, 1.0)] {
            assert!((code.projector[(i, i)].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn steane_and_shor_validate() {
        let steane = named_code("steane").unwrap();
        assert_eq!((steane.n(), steane.logical_qubits()), (7, 1));
        let code = steane.code_projector().unwrap();
        assert!((code.projector.trace().re - 2.0).abs() < 1e-9);
        let shor = named_code("shor").unwrap();
        assert_eq!((shor.n(), shor.logical_qubits()), (9, 1));
        // rho = Pi/K is idempotent up to the 1/K factor.
        let code = shor.code_projector().unwrap();
        let tr2 = trace_product(&code.rho, &code.rho).re;
        assert!((tr2 - 0.5).abs() < 1e-9);
    }

    #[test]
    fn from_text_parses_comments_and_signs() {
        let text = "# five-qubit code\nXZZXI\nIXZZX # second generator\n\nXIXZZ\nZXIXZ\n";
        let g = StabilizerGroup::from_text(text).unwrap();
        assert_eq!(g.num_generators(), 4);
        assert_eq!(g.n(), 5);
    }
}
