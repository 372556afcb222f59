//! Complete k-ary tree shapes and their pivoting classes.
//!
//! A shape is either a leaf or an internal vertex with exactly `k` ordered
//! children. Pivoting permutes the children of internal vertices; two
//! shapes are pivot-equivalent exactly when they are isomorphic as unordered
//! rooted trees, which is decided by comparing [`canonical_form`]s.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::exactnum::{exact_div, factorial, leaf_count_expanded, Compositions, Nat};
use crate::series::fuss_catalan;

/// One vertex of a shape together with its subtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf,
    Internal { vertices: u64, children: Box<[Node]> },
}

impl Node {
    pub fn internal(children: Vec<Node>) -> Node {
        let vertices = 1 + children.iter().map(Node::vertices).sum::<u64>();
        Node::Internal { vertices, children: children.into_boxed_slice() }
    }

    pub fn vertices(&self) -> u64 {
        match self {
            Node::Leaf => 1,
            Node::Internal { vertices, .. } => *vertices,
        }
    }

    pub fn children(&self) -> &[Node] {
        match self {
            Node::Leaf => &[],
            Node::Internal { children, .. } => children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf)
    }

    fn canonical(&self) -> Node {
        match self {
            Node::Leaf => Node::Leaf,
            Node::Internal { vertices, children } => {
                let mut kids: Vec<Node> = children.iter().map(Node::canonical).collect();
                kids.sort();
                Node::Internal { vertices: *vertices, children: kids.into_boxed_slice() }
            }
        }
    }

    fn is_canonical(&self) -> bool {
        let kids = self.children();
        kids.windows(2).all(|w| w[0] <= w[1]) && kids.iter().all(Node::is_canonical)
    }

    fn write_preorder(&self, out: &mut String) {
        match self {
            Node::Leaf => out.push('L'),
            Node::Internal { children, .. } => {
                out.push('I');
                for c in children.iter() {
                    c.write_preorder(out);
                }
            }
        }
    }

    /// Appends hook lengths in postorder and returns this subtree's size.
    fn collect_hooks(&self, out: &mut Vec<u64>) -> u64 {
        let size = 1 + self.children().iter().map(|c| c.collect_hooks(out)).sum::<u64>();
        out.push(size);
        size
    }

    fn expand_leaves(&self, arity: usize) -> Node {
        match self {
            Node::Leaf => Node::internal(vec![Node::Leaf; arity]),
            Node::Internal { children, .. } => {
                Node::internal(children.iter().map(|c| c.expand_leaves(arity)).collect())
            }
        }
    }
}

// Total order: vertex count first, then children lexicographically.
impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices().cmp(&other.vertices()).then_with(|| self.children().cmp(other.children()))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An unlabelled complete k-ary tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KTreeShape {
    arity: usize,
    root: Node,
}

impl KTreeShape {
    pub fn new(arity: usize, root: Node) -> Result<Self> {
        if arity < 2 {
            return Err(Error::invalid(format!("arity must be at least 2, got {arity}")));
        }
        fn check(node: &Node, arity: usize) -> bool {
            match node {
                Node::Leaf => true,
                Node::Internal { children, .. } => {
                    children.len() == arity && children.iter().all(|c| check(c, arity))
                }
            }
        }
        if !check(&root, arity) {
            return Err(Error::invalid(format!(
                "every internal vertex of a {arity}-ary shape needs exactly {arity} children"
            )));
        }
        Ok(KTreeShape { arity, root })
    }

    pub fn leaf(arity: usize) -> Self {
        KTreeShape { arity, root: Node::Leaf }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vertices(&self) -> u64 {
        self.root.vertices()
    }

    /// Number of internal vertices `n`; the shape has `kn + 1` vertices.
    pub fn internal_nodes(&self) -> u64 {
        (self.vertices() - 1) / self.arity as u64
    }

    pub fn leaves(&self) -> u64 {
        self.vertices() - self.internal_nodes()
    }

    /// Preorder string over `{I, L}`.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(self.vertices() as usize);
        self.root.write_preorder(&mut out);
        out
    }

    pub fn parse(arity: usize, text: &str) -> Result<Self> {
        fn node(bytes: &[u8], pos: &mut usize, arity: usize) -> Result<Node> {
            let c = *bytes
                .get(*pos)
                .ok_or_else(|| Error::invalid("shape string ended early"))?;
            *pos += 1;
            match c {
                b'L' => Ok(Node::Leaf),
                b'I' => {
                    let kids = (0..arity)
                        .map(|_| node(bytes, pos, arity))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Node::internal(kids))
                }
                other => Err(Error::invalid(format!(
                    "unexpected character {:?} in shape string",
                    other as char
                ))),
            }
        }
        if arity < 2 {
            return Err(Error::invalid(format!("arity must be at least 2, got {arity}")));
        }
        let bytes = text.trim().as_bytes();
        let mut pos = 0;
        let root = node(bytes, &mut pos, arity)?;
        if pos != bytes.len() {
            return Err(Error::invalid("trailing characters after shape"));
        }
        Ok(KTreeShape { arity, root })
    }
}

impl fmt::Display for KTreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// All complete `k`-ary shapes with `n` internal vertices, in ascending
/// shape order.
pub fn enumerate_shapes(k: usize, n: u64, budget: &Budget) -> Result<Vec<KTreeShape>> {
    if k < 2 {
        return Err(Error::invalid(format!("arity must be at least 2, got {k}")));
    }
    let count = fuss_catalan(k as u64, n);
    budget.check_shapes(
        || format!("enumerating {k}-ary shapes with {n} internal vertices"),
        u128::try_from(&count).unwrap_or(u128::MAX),
    )?;

    let mut by_size: Vec<Vec<Node>> = vec![vec![Node::Leaf]];
    for m in 1..=n {
        let mut level = Vec::new();
        for comp in Compositions::new(m - 1, k) {
            let pools: Vec<&[Node]> = comp.iter().map(|&c| by_size[c as usize].as_slice()).collect();
            let mut idx = vec![0usize; k];
            'odometer: loop {
                level.push(Node::internal(idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect()));
                for slot in (0..k).rev() {
                    idx[slot] += 1;
                    if idx[slot] < pools[slot].len() {
                        continue 'odometer;
                    }
                    idx[slot] = 0;
                }
                break;
            }
        }
        by_size.push(level);
    }
    let mut shapes: Vec<KTreeShape> = by_size
        .swap_remove(n as usize)
        .into_iter()
        .map(|root| KTreeShape { arity: k, root })
        .collect();
    shapes.sort();
    if Nat::from(shapes.len()) != count {
        return Err(Error::invariant(format!(
            "enumerated {} shapes, Fuss-Catalan count is {count}",
            shapes.len()
        )));
    }
    Ok(shapes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HookProfile {
    /// One hook length per vertex, ascending.
    pub hooks: Vec<u64>,
    pub product: Nat,
}

pub fn hook_profile(shape: &KTreeShape) -> HookProfile {
    let mut hooks = Vec::with_capacity(shape.vertices() as usize);
    shape.root.collect_hooks(&mut hooks);
    hooks.sort_unstable();
    let product = hooks.iter().fold(Nat::one(), |acc, &h| acc * h);
    HookProfile { hooks, product }
}

/// Increasing labellings via the hook length formula.
pub fn labelings_by_formula(shape: &KTreeShape) -> Result<Nat> {
    let profile = hook_profile(shape);
    exact_div(factorial(shape.vertices()), &profile.product).map_err(|_| {
        Error::invariant(format!("hook product of {shape} does not divide the vertex factorial"))
    })
}

/// Increasing labellings counted one by one: label `i` goes to any vertex
/// whose parent already carries a smaller label.
pub fn labelings_by_bruteforce(shape: &KTreeShape, budget: &Budget) -> Result<Nat> {
    budget.check_oracle(shape.arity, u128::from(shape.vertices()))?;

    let mut children: Vec<Vec<usize>> = Vec::new();
    fn flatten(node: &Node, children: &mut Vec<Vec<usize>>) -> usize {
        let id = children.len();
        children.push(Vec::new());
        let kids: Vec<usize> = node.children().iter().map(|c| flatten(c, children)).collect();
        children[id] = kids;
        id
    }
    let root = flatten(&shape.root, &mut children);

    fn count(frontier: &mut Vec<usize>, children: &[Vec<usize>]) -> u64 {
        if frontier.is_empty() {
            return 1;
        }
        let mut total = 0;
        for i in 0..frontier.len() {
            let v = frontier.swap_remove(i);
            let base = frontier.len();
            frontier.extend_from_slice(&children[v]);
            total += count(frontier, children);
            frontier.truncate(base);
            frontier.push(v);
            let last = frontier.len() - 1;
            frontier.swap(i, last);
        }
        total
    }
    Ok(Nat::from(count(&mut vec![root], &children)))
}

/// Representative of the pivot class: children of every vertex sorted
/// under the shape order.
pub fn canonical_form(shape: &KTreeShape) -> KTreeShape {
    KTreeShape { arity: shape.arity, root: shape.root.canonical() }
}

pub fn is_canonical(shape: &KTreeShape) -> bool {
    shape.root.is_canonical()
}

/// Number of distinct shapes in the pivot class of a canonical shape.
///
/// At each internal vertex the `k` children can be arranged in
/// `k! / ∏ mult!` distinct ways, where `mult` runs over multiplicities of
/// equal child subtrees.
pub fn orbit_size(canonical: &KTreeShape) -> Result<Nat> {
    if !is_canonical(canonical) {
        return Err(Error::invalid(format!("{canonical} is not in canonical form")));
    }
    fn orbit(node: &Node, k_factorial: &Nat) -> Nat {
        let kids = node.children();
        if kids.is_empty() {
            return Nat::one();
        }
        let mut acc = k_factorial.clone();
        let mut run = 1u64;
        for w in kids.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                acc /= factorial(run);
                run = 1;
            }
        }
        acc /= factorial(run);
        kids.iter().fold(acc, |a, c| a * orbit(c, k_factorial))
    }
    Ok(orbit(&canonical.root, &factorial(canonical.arity as u64)))
}

/// One pivoting class with its statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotClass {
    pub canonical: KTreeShape,
    /// Number of shapes in the class.
    pub class_size: Nat,
    /// Product of hook lengths (shared by every member).
    pub hook_product: Nat,
    /// Increasing labellings of any one member.
    pub labelings: Nat,
    /// `class_size × labelings`.
    pub total: Nat,
    /// `(k²n−kn+k)! · total / ((k!)^{kn+1} (kn+1)!)`.
    pub quotient: Nat,
}

/// Divisor `(k!)^{kn+1} (kn+1)!` turning a class total into its quotient.
fn quotient_divisor(k: u64, n: u64) -> Nat {
    factorial(k).pow((k * n + 1) as u32) * factorial(k * n + 1)
}

/// Groups every shape by canonical form and fills in the class statistics.
pub fn pivot_classes(k: usize, n: u64, budget: &Budget) -> Result<Vec<PivotClass>> {
    let shapes = enumerate_shapes(k, n, budget)?;
    let ku = k as u64;
    budget.check_factorial(
        || format!("class quotients for k={k}, n={n}"),
        u128::from(leaf_count_expanded(ku, n)),
    )?;

    let mut groups: BTreeMap<KTreeShape, u64> = BTreeMap::new();
    for s in &shapes {
        *groups.entry(canonical_form(s)).or_default() += 1;
    }

    let numerator_factor = factorial(leaf_count_expanded(ku, n));
    let divisor = quotient_divisor(ku, n);
    let mut classes = Vec::with_capacity(groups.len());
    for (canonical, seen) in groups {
        let class_size = orbit_size(&canonical)?;
        if class_size != Nat::from(seen) {
            return Err(Error::invariant(format!(
                "class {canonical}: symmetry product gives {class_size}, enumeration found {seen}"
            )));
        }
        let profile = hook_profile(&canonical);
        let labelings = labelings_by_formula(&canonical)?;
        let total = &class_size * &labelings;
        let quotient = exact_div(&numerator_factor * &total, &divisor).map_err(|_| {
            Error::verification(format!(
                "class {canonical} (k={k}, n={n}): (k!)^(kn+1)(kn+1)! does not divide (k²n−kn+k)!·total"
            ))
        })?;
        classes.push(PivotClass {
            canonical,
            class_size,
            hook_product: profile.product,
            labelings,
            total,
            quotient,
        });
    }
    Ok(classes)
}

/// Replaces every leaf by a `(k+1)`-vertex complete k-ary tree.
pub fn expand_leaves(shape: &KTreeShape) -> KTreeShape {
    KTreeShape { arity: shape.arity, root: shape.root.expand_leaves(shape.arity) }
}

/// Per-class outcome of [`verify_class_divisibility`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDivisibility {
    pub canonical: KTreeShape,
    pub quotient: Nat,
    /// `(k!)^{kn+1}` divides `(k²n−kn+k)! · total / (kn+1)!`.
    pub lemma_holds: bool,
    /// Binary only: `2^{2n}` divides `(2n+2) H T`.
    pub weak_binary_holds: Option<bool>,
    /// Binary only: `2^{2n+1}` divides `(2n+2)! · #class`.
    pub strong_binary_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDivisibilityReport {
    pub k: usize,
    pub n: u64,
    pub classes: Vec<ClassDivisibility>,
}

impl ClassDivisibilityReport {
    pub fn quotient_sum(&self) -> Nat {
        self.classes.iter().map(|c| &c.quotient).sum()
    }
}

/// Checks the per-class divisibility statements for every pivot class.
pub fn verify_class_divisibility(k: usize, n: u64, budget: &Budget) -> Result<ClassDivisibilityReport> {
    let classes = pivot_classes(k, n, budget)?;
    let ku = k as u64;
    let big = factorial(leaf_count_expanded(ku, n));
    let vertices_factorial = factorial(ku * n + 1);
    let modulus = factorial(ku).pow((ku * n + 1) as u32);

    let mut rows = Vec::with_capacity(classes.len());
    for class in classes {
        let scaled = exact_div(&big * &class.total, &vertices_factorial).map_err(|_| {
            Error::invariant(format!("(kn+1)! does not divide (k²n−kn+k)!·total for {}", class.canonical))
        })?;
        let lemma_holds = (&scaled % &modulus).is_zero();

        let (weak, strong) = if k == 2 {
            let lhs = Nat::from(2 * n + 2) * &class.hook_product * &class.total;
            let leaf_form = factorial(2 * n + 2) * &class.class_size;
            if lhs != leaf_form {
                return Err(Error::verification(format!(
                    "class {}: (2n+2)·H·T = {lhs} but (2n+2)!·#class = {leaf_form}",
                    class.canonical
                )));
            }
            let weak = (&lhs % (Nat::one() << (2 * n))).is_zero();
            let strong = (&leaf_form % (Nat::one() << (2 * n + 1))).is_zero();
            let prop1 = exact_div(Nat::from(n + 1) * &class.total, &(Nat::one() << (2 * n)));
            if prop1.as_ref().ok() != Some(&class.quotient) {
                return Err(Error::verification(format!(
                    "class {}: (n+1)·T/2^(2n) does not reproduce the quotient {}",
                    class.canonical, class.quotient
                )));
            }
            (Some(weak), Some(strong))
        } else {
            (None, None)
        };

        if !lemma_holds || weak == Some(false) || strong == Some(false) {
            return Err(Error::verification(format!(
                "divisibility fails for class {} (k={k}, n={n}): lemma={lemma_holds}, weak={weak:?}, strong={strong:?}",
                class.canonical
            )));
        }
        rows.push(ClassDivisibility {
            canonical: class.canonical,
            quotient: class.quotient,
            lemma_holds,
            weak_binary_holds: weak,
            strong_binary_holds: strong,
        });
    }
    Ok(ClassDivisibilityReport { k, n, classes: rows })
}

/// `Σ H(class) · quotient(class)`, checked against the closed form.
pub fn class_weighted_sum(k: usize, n: u64, budget: &Budget) -> Result<Nat> {
    let sum: Nat = pivot_classes(k, n, budget)?
        .iter()
        .map(|c| &c.hook_product * &c.quotient)
        .sum();
    let closed = crate::series::f_closed_form(k as u64, n)?;
    if sum != closed {
        return Err(Error::verification(format!(
            "weighted class sum {sum} differs from closed form {closed} (k={k}, n={n})"
        )));
    }
    Ok(sum)
}

/// Sum of `total` over all classes, i.e. `L_{kn+1}`.
pub fn class_total_sum(classes: &[PivotClass]) -> Nat {
    classes.iter().map(|c| &c.total).sum()
}

/// Sum of class sizes, i.e. the number of shapes.
pub fn class_size_sum(classes: &[PivotClass]) -> Nat {
    classes.iter().map(|c| &c.class_size).sum()
}
