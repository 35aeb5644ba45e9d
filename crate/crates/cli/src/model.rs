//! Resolution of parsed documents into charts, geometries and fields.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use soliton_core::hypersurface::{HypersurfaceError, Immersion, SphereChain};
use soliton_core::riemann::{Chart, Geometry, GeometryError, Metric, OneForm, Tensor2, VectorField};
use soliton_core::symbolic::{Expr, ZeroConfig};

use crate::dsl::{parse_document, Diagnostic, Document, MetricDecl};

// Guards against immersion cycles.
const MAX_DEPTH: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{diag}")]
    Parse { path: String, diag: Diagnostic },
    #[error("{path}: {msg}")]
    Model { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

/// A resolved document. `inputs` holds the raw bytes of this file and every
/// file it references, in load order.
#[derive(Debug)]
pub struct Model {
    pub path: PathBuf,
    pub doc: Document,
    pub chart: Arc<Chart>,
    pub geometry: Arc<Geometry>,
    pub immersion: Option<Embedding>,
    pub inputs: Vec<Vec<u8>>,
}

#[derive(Debug)]
pub struct Embedding {
    pub target: Box<Model>,
    pub map: Vec<Expr>,
    pub immersion: Immersion,
}

impl Model {
    pub fn load(path: &Path, config: ZeroConfig) -> Result<Model, InputError> {
        load_at(path, config, 0)
    }

    pub fn from_text(path: &Path, text: &str, config: ZeroConfig) -> Result<Model, InputError> {
        build(path, text.as_bytes().to_vec(), config, 0)
    }

    pub fn name(&self) -> &str {
        &self.doc.name
    }

    fn err(&self, msg: impl Into<String>) -> InputError {
        InputError::Model {
            path: self.path.display().to_string(),
            msg: msg.into(),
        }
    }

    pub fn vector(&self, name: &str) -> Result<VectorField, InputError> {
        self.doc
            .vector(name)
            .map(|v| VectorField(v.clone()))
            .ok_or_else(|| self.err(format!("no vector named '{name}'")))
    }

    pub fn form(&self, name: &str) -> Result<OneForm, InputError> {
        self.doc
            .form(name)
            .map(|v| OneForm(v.clone()))
            .ok_or_else(|| self.err(format!("no form named '{name}'")))
    }

    pub fn function(&self, name: &str) -> Result<Expr, InputError> {
        self.doc
            .function(name)
            .cloned()
            .ok_or_else(|| self.err(format!("no function named '{name}'")))
    }

    pub fn tensor(&self, name: &str) -> Result<Tensor2, InputError> {
        self.doc
            .tensor(name)
            .map(|t| Tensor2(t.clone()))
            .ok_or_else(|| self.err(format!("no tensor named '{name}'")))
    }

    /// Frame members, in order, as `(name, field)`.
    pub fn frame(&self, name: &str) -> Result<Vec<(String, VectorField)>, InputError> {
        let members = self.doc.frame(name).ok_or_else(|| self.err(format!("no frame named '{name}'")))?;
        members.iter().map(|m| Ok((m.clone(), self.vector(m)?))).collect()
    }

    pub fn embedding(&self) -> Result<&Embedding, InputError> {
        self.immersion
            .as_ref()
            .ok_or_else(|| self.err("document has no immersion block"))
    }

    /// `M -> S -> E` when this document immerses into a document that itself
    /// immerses into a flat chart.
    pub fn sphere_chain(&self) -> Result<SphereChain, InputError> {
        let emb = self.embedding()?;
        let sphere = &emb.target;
        let outer = sphere
            .immersion
            .as_ref()
            .ok_or_else(|| self.err(format!("target '{}' has no immersion block", sphere.name())))?;
        SphereChain::new(
            outer.target.geometry.clone(),
            sphere.chart.clone(),
            outer.map.clone(),
            self.chart.clone(),
            emb.map.clone(),
        )
        .map_err(|e| self.err(e.to_string()))
    }

    /// Outermost document of the immersion chain.
    pub fn root(&self) -> &Model {
        match &self.immersion {
            Some(e) => e.target.root(),
            None => self,
        }
    }
}

fn load_at(path: &Path, config: ZeroConfig, depth: usize) -> Result<Model, InputError> {
    let bytes = std::fs::read(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })?;
    build(path, bytes, config, depth)
}

fn build(path: &Path, bytes: Vec<u8>, config: ZeroConfig, depth: usize) -> Result<Model, InputError> {
    let shown = path.display().to_string();
    let model_err = |msg: String| InputError::Model {
        path: shown.clone(),
        msg,
    };
    if depth > MAX_DEPTH {
        return Err(model_err("immersion chain is too deep (cycle?)".into()));
    }
    let text = std::str::from_utf8(&bytes).map_err(|e| model_err(format!("not UTF-8: {e}")))?;
    let doc = parse_document(text).map_err(|diag| InputError::Parse {
        path: shown.clone(),
        diag,
    })?;
    let chart = Chart::new(doc.coords.clone(), doc.params.clone(), doc.assumptions.clone(), config)
        .map_err(|e| model_err(e.to_string()))?;
    let chart = Arc::new(chart);
    let mut inputs = vec![bytes.clone()];

    let immersion = match &doc.immersion {
        None => None,
        Some(decl) => {
            let target_path = path.parent().unwrap_or(Path::new(".")).join(&decl.target);
            let target = load_at(&target_path, config, depth + 1)?;
            inputs.extend(target.inputs.iter().cloned());
            let tcoords = target.chart.coords();
            for (name, _, line) in &decl.map {
                if !tcoords.iter().any(|s| s.name() == name) {
                    return Err(model_err(format!("line {line}: '{name}' is not a coordinate of '{}'", target.name())));
                }
            }
            let mut map = Vec::new();
            for s in tcoords {
                let (_, e, _) = decl.map.iter().find(|(n, _, _)| n == s.name()).ok_or_else(|| {
                    model_err(format!("line {}: immersion does not assign '{s}' of '{}'", decl.line, target.name()))
                })?;
                map.push(e.clone());
            }
            let immersion = Immersion::new(chart.clone(), target.geometry.clone(), map.clone())
                .map_err(|e: HypersurfaceError| model_err(format!("line {}: {e}", decl.line)))?;
            Some(Embedding {
                target: Box::new(target),
                map,
                immersion,
            })
        }
    };

    let g = match &doc.metric {
        MetricDecl::Components(g) => Tensor2(g.clone()),
        MetricDecl::Induced => immersion.as_ref().expect("validated by the parser").immersion.induced_metric(),
    };
    let metric = Metric::new(chart.clone(), g).map_err(|e: GeometryError| model_err(e.to_string()))?;
    Ok(Model {
        path: path.to_path_buf(),
        doc,
        chart,
        geometry: Arc::new(Geometry::new(metric)),
        immersion,
        inputs,
    })
}
