use folding::{
    certify_contracting, certify_end_periodic_contracting, ContractedCertificate, Failure,
    TerminalKind,
};
use graph_core::{induced_pi1_map, pi1_basis, spanning_tree, Id, WordMap};
use serde::Serialize;

use crate::injectivity::{boundary_injectivity_check, BoundaryInjectivityReport};
use crate::oracle::{first_return_oracle, OracleReport, DEFAULT_DEPTH};
use crate::theta::{Side, ThetaComplex};
use crate::CouplingError;

/// Powers of `g` checked for `λ = 0` boundary loops.
pub const DEFAULT_K_MAX: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyEquivalenceCertificate {
    pub verdict: bool,
    /// Edges collapsed by `f`, contracted before folding.
    pub contracted: usize,
    pub folds: usize,
    pub all_type1: bool,
    pub terminal: TerminalKind,
    pub failure: Option<Failure>,
    #[serde(skip)]
    pub witness: ContractedCertificate,
}

/// Folds `f` after contracting the forest of edges it collapses. It is a
/// homotopy equivalence when no cycle is collapsed, every fold identifies
/// distinct vertices and the terminal immersion is bijective.
pub fn certify_f(theta: &ThetaComplex) -> Result<HomotopyEquivalenceCertificate, CouplingError> {
    let c = certify_contracting(&theta.f)?;
    let w = c.witness();
    Ok(HomotopyEquivalenceCertificate {
        verdict: c.verdict(),
        contracted: c.contraction.forest.len() + c.contraction.loops.len(),
        folds: w.steps.len(),
        all_type1: w.all_type1(),
        terminal: w.terminal_kind,
        failure: c.certificate.failure.clone(),
        witness: c,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificates {
    /// Both constituent maps fold to homeomorphisms.
    pub constituents: bool,
    pub f: bool,
    pub boundary: Vec<BoundaryInjectivityReport>,
    pub k_max: usize,
    pub oracle: OracleReport,
}

impl Certificates {
    pub fn boundary_ok(&self) -> bool {
        self.boundary.iter().all(|r| r.certified)
    }

    pub fn all_ok(&self) -> bool {
        self.constituents && self.f && self.boundary_ok() && self.oracle.all_agree()
    }

    pub fn line(&self) -> String {
        let he = |b: bool| if b { "HE" } else { "NOT-HE" };
        let boundary = if self.boundary_ok() {
            format!("INJ(k<={})", self.k_max)
        } else {
            "FAIL".to_string()
        };
        let oracle = if self.oracle.all_agree() {
            "OK".to_string()
        } else {
            format!("MISMATCH({})", self.oracle.total() - self.oracle.agreed())
        };
        format!(
            "constituents={}, f={}, boundary={boundary}, oracle={oracle}",
            he(self.constituents),
            he(self.f)
        )
    }
}

/// `π₁` of the mapping torus of `f`: `⟨x₁…x_r, t | t xᵢ t⁻¹ = f_*(xᵢ)⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeByCyclicPresentation {
    pub rank: usize,
    pub basepoint: Id,
    /// Edges of `Θ` outside the maximal tree, one per generator.
    pub generators: Vec<Id>,
    pub monodromy: WordMap,
    /// `f_*⁻¹`, read off by lifting through the folds of `f`.
    pub inverse: WordMap,
    pub invertible: bool,
    pub certificates: Certificates,
}

impl FreeByCyclicPresentation {
    pub fn text(&self) -> String {
        let mut out = format!("rank: {}\nmonodromy:\n", self.rank);
        for line in self.monodromy.to_string().lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&format!("certificates: {}\n", self.certificates.line()));
        out
    }
}

pub fn present_free_by_cyclic(theta: &ThetaComplex) -> Result<FreeByCyclicPresentation, CouplingError> {
    let cert = certify_f(theta)?;
    if !cert.verdict {
        return Err(CouplingError::NotHomotopyEquivalence);
    }
    let g = &theta.graph;
    let base = g.vertices().next().expect("Θ is nonempty").clone();
    let tree = spanning_tree(g, &base)?;
    let monodromy = induced_pi1_map(&theta.f, &tree, &tree, &base)?.reduced();

    // f_*⁻¹(xᵢ) lifts ⟨f(*),*⟩·γᵢ·⟨*,f(*)⟩ back through the folds.
    let image = theta.f.vertex(&base)?.clone();
    let to = tree.path(&base, &image)?;
    let mut inverse = Vec::new();
    for (_, gamma) in pi1_basis(g, &tree, &base)? {
        let conj = to.inverse().concat(&gamma).and_then(|p| p.concat(&to));
        let conj = conj.expect("paths meet").reduced();
        let lifted = cert.witness.lift(&conj, &base, &base)?;
        inverse.push(tree.word_of(&lifted).reduced());
    }
    let inverse = WordMap { images: inverse };
    let invertible = monodromy.after(&inverse).is_some_and(|w| w.is_identity())
        && inverse.after(&monodromy).is_some_and(|w| w.is_identity());

    let constituents = [&theta.left, &theta.right]
        .into_iter()
        .map(|x| certify_end_periodic_contracting(x).map(|c| c.verdict()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .all(|b| b);
    let mut boundary = Vec::new();
    for side in [Side::Left, Side::Right] {
        let x = theta.model(side);
        for o in &x.orbits {
            boundary.push(boundary_injectivity_check(x, &o.leader, DEFAULT_K_MAX)?);
        }
    }
    let oracle = first_return_oracle(theta, DEFAULT_DEPTH)?;
    Ok(FreeByCyclicPresentation {
        rank: tree.rank(),
        basepoint: base,
        generators: tree.generators.clone(),
        monodromy,
        inverse,
        invertible,
        certificates: Certificates {
            constituents,
            f: cert.verdict,
            boundary,
            k_max: DEFAULT_K_MAX,
            oracle,
        },
    })
}
