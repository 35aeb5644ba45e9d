use std::collections::BTreeSet;

use crate::symbolic::{Domain, DomainConstraint, Symbol, ZeroConfig};

use super::GeometryError;

/// Coordinate chart: ordered coordinates, constant parameters, and the
/// sampling domain they live in.
#[derive(Clone, Debug)]
pub struct Chart {
    coords: Vec<Symbol>,
    params: Vec<Symbol>,
    domain: Domain,
}

impl Chart {
    pub fn new(
        coords: Vec<Symbol>,
        params: Vec<Symbol>,
        constraints: Vec<DomainConstraint>,
        config: ZeroConfig,
    ) -> Result<Self, GeometryError> {
        if coords.len() < 2 {
            return Err(GeometryError::Chart(format!("dimension {} < 2", coords.len())));
        }
        let mut seen = BTreeSet::new();
        for s in coords.iter().chain(&params) {
            if !seen.insert(s.clone()) {
                return Err(GeometryError::Chart(format!("symbol '{s}' declared twice")));
            }
        }
        let mut declared: BTreeSet<Symbol> = BTreeSet::new();
        let all: Vec<Symbol> = coords.iter().chain(&params).cloned().collect();
        for c in &constraints {
            if !seen.contains(&c.symbol) {
                return Err(GeometryError::Chart(format!("constraint on undeclared symbol '{}'", c.symbol)));
            }
            if let Some(s) = c.bound.symbols().into_iter().find(|s| !declared.contains(s) || s == &c.symbol) {
                return Err(GeometryError::Chart(format!(
                    "bound of '{c}' uses '{s}' before it is constrained"
                )));
            }
            declared.insert(c.symbol.clone());
        }
        let domain = Domain::new(all, constraints, config)?;
        Ok(Chart { coords, params, domain })
    }

    /// Unconstrained chart with default sampling.
    pub fn simple(coords: &[&str]) -> Self {
        Chart::new(coords.iter().map(|s| Symbol::new(s)).collect(), Vec::new(), Vec::new(), ZeroConfig::default())
            .expect("valid chart")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Symbol] {
        &self.coords
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn constraints(&self) -> &[DomainConstraint] {
        self.domain.constraints()
    }

    /// All declared symbols, coordinates first.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.coords.iter().chain(&self.params).cloned().collect()
    }

    pub fn with_config(&self, config: ZeroConfig) -> Result<Self, GeometryError> {
        Chart::new(self.coords.clone(), self.params.clone(), self.constraints().to_vec(), config)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|s| s.name() == name)
    }
}
