//! Cayley tables of finite loops.
//!
//! A loop of order n is stored as a row-major n*n table over {0, .., n-1}
//! whose rows and columns are permutations and whose identity element is 0.
//! `mul(a, b)` reads row a, column b. Left division `ldiv(a, b)` solves
//! a*x = b and right division `rdiv(a, b)` solves x*b = a; both are
//! precomputed at construction time.

use crate::error::{Axis, Error, Result};
use crate::perm::{lcm, Perm};

pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopTable {
    n: usize,
    cells: Vec<Element>,
    ldiv: Vec<Element>,
    rdiv: Vec<Element>,
}

impl LoopTable {
    /// Builds a loop from table rows, requiring the identity to be 0.
    pub fn from_rows(rows: Vec<Vec<Element>>) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::OrderMismatch { left: n, right: row.len() });
            }
            cells.extend(row);
        }
        Self::from_cells(n, cells)
    }

    /// Builds a loop from a flat row-major cell vector.
    pub fn from_cells(n: usize, cells: Vec<Element>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::OrderMismatch { left: n * n, right: cells.len() });
        }
        validate_latin(n, &cells)?;
        if n == 0 {
            return Err(Error::NoIdentity);
        }
        let identity_at_0 = (0..n).all(|y| cells[y] == y) && (0..n).all(|x| cells[x * n] == x);
        if !identity_at_0 {
            return Err(Error::NoIdentity);
        }
        Ok(Self::from_cells_validated(n, cells))
    }

    /// Builds a loop from rows whose identity may be any element; the table
    /// is relabeled by swapping that element with 0. Returns the original
    /// label of the identity.
    pub fn from_rows_any_identity(rows: Vec<Vec<Element>>) -> Result<(Self, Element)> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::OrderMismatch { left: n, right: row.len() });
            }
            cells.extend(row);
        }
        if cells.len() != n * n {
            return Err(Error::OrderMismatch { left: n * n, right: cells.len() });
        }
        validate_latin(n, &cells)?;
        let identity = (0..n).find(|&u| {
            (0..n).all(|y| cells[u * n + y] == y) && (0..n).all(|x| cells[x * n + u] == x)
        });
        let u = identity.ok_or(Error::NoIdentity)?;
        if u == 0 {
            return Ok((Self::from_cells_validated(n, cells), 0));
        }
        let swap = |v: Element| -> Element {
            if v == 0 {
                u
            } else if v == u {
                0
            } else {
                v
            }
        };
        let mut relabeled = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                relabeled[swap(x) * n + swap(y)] = swap(cells[x * n + y]);
            }
        }
        Ok((Self::from_cells_validated(n, relabeled), u))
    }

    fn from_cells_validated(n: usize, cells: Vec<Element>) -> Self {
        let mut ldiv = vec![0; n * n];
        let mut rdiv = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = cells[a * n + b];
                ldiv[a * n + p] = b;
                rdiv[p * n + b] = a;
            }
        }
        LoopTable { n, cells, ldiv, rdiv }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.n
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.cells[a * self.n + b]
    }

    /// Left division a\b: the unique x with a*x = b.
    pub fn ldiv(&self, a: Element, b: Element) -> Element {
        self.ldiv[a * self.n + b]
    }

    /// Right division a/b: the unique x with x*b = a.
    pub fn rdiv(&self, a: Element, b: Element) -> Element {
        self.rdiv[a * self.n + b]
    }

    /// The right translation R_x, sending y to y*x.
    pub fn right_translation(&self, x: Element) -> Perm {
        Perm::from_image((0..self.n).map(|y| self.mul(y, x)).collect())
            .expect("columns of a Latin square are permutations")
    }

    /// The left translation L_x, sending y to x*y.
    pub fn left_translation(&self, x: Element) -> Perm {
        Perm::from_image(self.cells[x * self.n..(x + 1) * self.n].to_vec())
            .expect("rows of a Latin square are permutations")
    }

    /// The left and right inverses of x: the solutions of a*x = 0 and x*b = 0.
    pub fn inverses(&self, x: Element) -> (Element, Element) {
        (self.rdiv(0, x), self.ldiv(x, 0))
    }

    pub fn has_two_sided_inverses(&self) -> bool {
        self.elements().all(|x| {
            let (l, r) = self.inverses(x);
            l == r
        })
    }

    /// The inversion map J: x -> x^-1, defined when inverses are two-sided.
    pub fn inversion_perm(&self) -> Result<Perm> {
        let mut image = Vec::with_capacity(self.n);
        for x in self.elements() {
            let (l, r) = self.inverses(x);
            if l != r {
                return Err(Error::NoTwoSidedInverse { element: x });
            }
            image.push(l);
        }
        Perm::from_image(image)
    }

    /// Left-normed power: x^0 = 0 and x^(k+1) = x^k * x.
    pub fn power(&self, x: Element, k: usize) -> Element {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// The least k >= 1 with x^k = 0, read off the cycle of 0 under R_x.
    pub fn element_order(&self, x: Element) -> usize {
        let mut acc = self.mul(0, x);
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.element_order(x)).fold(1, lcm)
    }

    /// Sorted list of distinct squares x*x.
    pub fn squares(&self) -> Vec<Element> {
        let mut present = vec![false; self.n];
        for x in self.elements() {
            present[self.mul(x, x)] = true;
        }
        (0..self.n).filter(|&v| present[v]).collect()
    }

    /// Applies a relabeling f with f(0) = 0, producing the isomorphic copy
    /// whose table satisfies new(f(x), f(y)) = f(x*y).
    pub fn relabel(&self, f: &Perm) -> Result<LoopTable> {
        if f.degree() != self.n {
            return Err(Error::OrderMismatch { left: self.n, right: f.degree() });
        }
        let mut cells = vec![0; self.n * self.n];
        for x in self.elements() {
            for y in self.elements() {
                cells[f.apply(x) * self.n + f.apply(y)] = f.apply(self.mul(x, y));
            }
        }
        Self::from_cells(self.n, cells)
    }

    /// Parses the plain text format: optional comment and blank lines, the
    /// order n, then n rows of n entries. The identity must be element 0.
    pub fn from_text(text: &str) -> Result<Self> {
        let (_, rows) = parse_table_text(text)?;
        Self::from_rows(rows)
    }

    /// Like `from_text` but accepts any identity element, relabeling it to 0.
    pub fn from_text_any_identity(text: &str) -> Result<(Self, Element)> {
        let (_, rows) = parse_table_text(text)?;
        Self::from_rows_any_identity(rows)
    }

    /// Writes the plain text format: the order, then one line per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for x in self.elements() {
            let row: Vec<String> =
                (0..self.n).map(|y| self.mul(x, y).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn validate_latin(n: usize, cells: &[Element]) -> Result<()> {
    let mut seen = vec![false; n];
    for x in 0..n {
        seen.fill(false);
        for y in 0..n {
            let v = cells[x * n + y];
            if v >= n || seen[v] {
                return Err(Error::NotLatinSquare { axis: Axis::Row, index: x });
            }
            seen[v] = true;
        }
    }
    for y in 0..n {
        seen.fill(false);
        for x in 0..n {
            let v = cells[x * n + y];
            if seen[v] {
                return Err(Error::NotLatinSquare { axis: Axis::Column, index: y });
            }
            seen[v] = true;
        }
    }
    Ok(())
}

fn parse_table_text(text: &str) -> Result<(usize, Vec<Vec<Element>>)> {
    let mut data = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));
    let last_line = text.lines().count().max(1);

    let (line_no, header) = data
        .next()
        .ok_or(Error::FileFormat { line: last_line, message: "expected loop order".into() })?;
    let n: usize = header.parse().map_err(|_| Error::FileFormat {
        line: line_no,
        message: format!("expected loop order, found '{header}'"),
    })?;
    if n == 0 {
        return Err(Error::FileFormat { line: line_no, message: "order must be positive".into() });
    }

    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (line_no, line) = data.next().ok_or(Error::FileFormat {
            line: last_line,
            message: format!("expected {} rows, found {}", n, rows.len()),
        })?;
        let mut row = Vec::with_capacity(n);
        for token in line.split_whitespace() {
            let v: usize = token.parse().map_err(|_| Error::FileFormat {
                line: line_no,
                message: format!("invalid entry '{token}'"),
            })?;
            row.push(v);
        }
        if row.len() != n {
            return Err(Error::FileFormat {
                line: line_no,
                message: format!("expected {} entries, found {}", n, row.len()),
            });
        }
        rows.push(row);
    }
    if let Some((line_no, _)) = data.next() {
        return Err(Error::FileFormat {
            line: line_no,
            message: "unexpected trailing content".into(),
        });
    }
    Ok((n, rows))
}
