//! Attribute values, tuples and the binning used to turn them into pdf keys.

use std::fmt;

/// One attribute component: a categorical code or a real scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AttrValue {
    Cat(u32),
    Real(f64),
}

/// Fixed-arity attribute tuple. The null tuple stands for an absent element.
#[derive(Clone, Debug, PartialEq)]
pub struct AttrTuple {
    values: Vec<AttrValue>,
    is_null: bool,
}

impl AttrTuple {
    /// Builds a non-null tuple. Returns `None` for an empty component list.
    pub fn new(values: Vec<AttrValue>) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(AttrTuple { values, is_null: false })
    }

    pub fn null() -> Self {
        AttrTuple { values: Vec::new(), is_null: true }
    }

    pub fn real(x: f64) -> Self {
        AttrTuple { values: vec![AttrValue::Real(x)], is_null: false }
    }

    pub fn cat(c: u32) -> Self {
        AttrTuple { values: vec![AttrValue::Cat(c)], is_null: false }
    }

    pub fn is_null(&self) -> bool {
        self.is_null
    }

    pub fn values(&self) -> &[AttrValue] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [AttrValue] {
        &mut self.values
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }
}

impl fmt::Display for AttrTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_null {
            return write!(f, "#");
        }
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            match v {
                AttrValue::Cat(c) => write!(f, "c{c}")?,
                AttrValue::Real(x) => write!(f, "{x}")?,
            }
        }
        Ok(())
    }
}

/// Discretised attribute component used as a pdf key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bin {
    Cat(u32),
    Real(i64),
}

impl fmt::Display for Bin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bin::Cat(c) => write!(f, "c{c}"),
            Bin::Real(b) => write!(f, "r{b}"),
        }
    }
}

/// Uniform-width discretisation of real components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Binning {
    pub width: f64,
}

impl Default for Binning {
    fn default() -> Self {
        Binning { width: 1.0 }
    }
}

impl Binning {
    pub fn new(width: f64) -> Self {
        assert!(width > 0.0 && width.is_finite(), "bin width must be positive");
        Binning { width }
    }

    pub fn bin(&self, v: &AttrValue) -> Bin {
        match *v {
            AttrValue::Cat(c) => Bin::Cat(c),
            AttrValue::Real(x) => Bin::Real((x / self.width).floor() as i64),
        }
    }
}
