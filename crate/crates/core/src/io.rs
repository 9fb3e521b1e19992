//! View directories on disk.
//!
//! A view directory holds `view.json` plus the CSV files it names:
//! `objects.csv` and `classes.csv` with header `id,<neuron>…`, and optionally
//! `bias.csv` (`id,bias`) and `predictions.csv` (`id,class`).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::view::{ManyValuedView, Predictions};

pub const MANIFEST: &str = "view.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewManifest {
    pub objects: String,
    pub classes: String,
    #[serde(default)]
    pub bias: Option<String>,
    #[serde(default)]
    pub predictions: Option<String>,
    pub neuron_count: usize,
    #[serde(default)]
    pub activation: String,
    #[serde(default)]
    pub source_model: String,
}

impl Default for ViewManifest {
    fn default() -> Self {
        ViewManifest {
            objects: "objects.csv".into(),
            classes: "classes.csv".into(),
            bias: None,
            predictions: None,
            neuron_count: 0,
            activation: String::new(),
            source_model: String::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LoadedView {
    pub view: ManyValuedView,
    pub manifest: ViewManifest,
    /// every file that was read, manifest first
    pub files: Vec<PathBuf>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::format(path, e.to_string()))
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn parse_float(cell: &str, path: &Path, row: usize, column: &str) -> Result<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::format(
            path,
            format!("row {row}, column `{column}`: `{cell}` is not a finite decimal number"),
        )),
    }
}

/// Ids, neuron names and values of an `id,<neuron>…` matrix file.
fn read_matrix(path: &Path) -> Result<(Vec<String>, Vec<String>, Matrix)> {
    let text = read_text(path)?;
    let mut rd = reader(&text);
    let header = rd.headers().map_err(|e| Error::format(path, e.to_string()))?.clone();
    if header.get(0) != Some("id") || header.len() < 2 {
        return Err(Error::format(
            path,
            format!("header must be `id,<neuron>,…`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| Error::format(path, e.to_string()))?;
        ids.push(rec[0].to_string());
        for (j, cell) in rec.iter().skip(1).enumerate() {
            values.push(parse_float(cell, path, i + 2, &names[j])?);
        }
    }
    let m = Matrix::from_vec(ids.len(), names.len(), values);
    Ok((ids, names, m))
}

fn read_pairs(path: &Path, second: &str) -> Result<Vec<(String, String)>> {
    let text = read_text(path)?;
    let mut rd = reader(&text);
    let header = rd.headers().map_err(|e| Error::format(path, e.to_string()))?.clone();
    if header.len() != 2 || &header[0] != "id" || &header[1] != second {
        return Err(Error::format(
            path,
            format!(
                "header must be `id,{second}`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::format(path, e.to_string()))?;
        out.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(out)
}

/// Reads an `id,class` file.
pub fn read_predictions(path: &Path) -> Result<Predictions> {
    let mut out = Predictions::new();
    for (i, (g, c)) in read_pairs(path, "class")?.into_iter().enumerate() {
        if out.insert(g.clone(), c).is_some() {
            return Err(Error::format(path, format!("row {}: duplicate id `{g}`", i + 2)));
        }
    }
    Ok(out)
}

pub fn predictions_csv(p: &Predictions) -> String {
    let mut out = String::from("id,class\n");
    for (g, c) in p {
        out.push_str(&format!("{g},{c}\n"));
    }
    out
}

fn matrix_csv(ids: &[String], names: &[String], m: &Matrix) -> String {
    let mut out = String::from("id");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (id, row) in ids.iter().zip(m.iter_rows()) {
        out.push_str(id);
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Loads and validates a view directory; every failure names the offending file.
pub fn read_view(dir: &Path) -> Result<LoadedView> {
    let manifest_path = dir.join(MANIFEST);
    let manifest: ViewManifest = serde_json::from_str(&read_text(&manifest_path)?)
        .map_err(|e| Error::format(&manifest_path, e.to_string()))?;
    let objects_path = dir.join(&manifest.objects);
    let classes_path = dir.join(&manifest.classes);
    let (object_ids, names, o) = read_matrix(&objects_path)?;
    let (class_ids, class_names, w) = read_matrix(&classes_path)?;
    if names.len() != manifest.neuron_count {
        return Err(Error::format(
            &objects_path,
            format!("{} neuron columns, manifest says {}", names.len(), manifest.neuron_count),
        ));
    }
    if class_names != names {
        return Err(Error::format(&classes_path, "neuron columns differ from the object file"));
    }
    let mut files = vec![manifest_path, objects_path.clone(), classes_path.clone()];
    let mut view = ManyValuedView::with_neuron_names(object_ids, class_ids, names, o, w)
        .map_err(|e| Error::format(&objects_path, e.to_string()))?;
    if let Some(b) = &manifest.bias {
        let path = dir.join(b);
        let pairs = read_pairs(&path, "bias")?;
        let mut bias = vec![f64::NAN; view.class_ids().len()];
        for (i, (c, v)) in pairs.iter().enumerate() {
            let k = view
                .class_index(c)
                .map_err(|_| Error::format(&path, format!("row {}: unknown class `{c}`", i + 2)))?;
            if !bias[k].is_nan() {
                return Err(Error::format(&path, format!("row {}: duplicate class `{c}`", i + 2)));
            }
            bias[k] = parse_float(v, &path, i + 2, "bias")?;
        }
        if let Some(k) = bias.iter().position(|v| v.is_nan()) {
            return Err(Error::format(&path, format!("no bias for class `{}`", view.class_ids()[k])));
        }
        view = view.with_bias(bias).map_err(|e| Error::format(&path, e.to_string()))?;
        files.push(path);
    }
    if let Some(p) = &manifest.predictions {
        let path = dir.join(p);
        let preds = read_predictions(&path)?;
        view = view.with_predictions(preds).map_err(|e| Error::format(&path, e.to_string()))?;
        files.push(path);
    }
    Ok(LoadedView { view, manifest, files })
}

/// Writes `view` in the directory layout read by [`read_view`].
pub fn write_view(dir: &Path, view: &ManyValuedView, activation: &str, source_model: &str) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut manifest = ViewManifest {
        neuron_count: view.neuron_count(),
        activation: activation.to_string(),
        source_model: source_model.to_string(),
        ..ViewManifest::default()
    };
    let names = view.neuron_names();
    fs::write(dir.join(&manifest.objects), matrix_csv(view.object_ids(), names, view.object_view()))?;
    fs::write(dir.join(&manifest.classes), matrix_csv(view.class_ids(), names, view.class_view()))?;
    if let Some(b) = view.bias() {
        let mut out = String::from("id,bias\n");
        for (c, v) in view.class_ids().iter().zip(b) {
            out.push_str(&format!("{c},{v}\n"));
        }
        fs::write(dir.join("bias.csv"), out)?;
        manifest.bias = Some("bias.csv".into());
    }
    if let Some(p) = view.model_predictions() {
        fs::write(dir.join("predictions.csv"), predictions_csv(p))?;
        manifest.predictions = Some("predictions.csv".into());
    }
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    fs::write(dir.join(MANIFEST), json + "\n")?;
    Ok(())
}
