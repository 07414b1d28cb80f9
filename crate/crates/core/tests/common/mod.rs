#![allow(dead_code)]

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VOCAB: &[&str] = &[
    "salud",
    "educación",
    "economía",
    "política",
    "gobierno",
    "programa",
    "sistema",
    "nacional",
    "desarrollo",
    "sostenible",
    "pobreza",
    "empleo",
    "trabajo",
    "inversión",
    "corrupción",
    "justicia",
    "congreso",
    "reforma",
    "hospital",
    "escuela",
    "universidad",
    "docentes",
    "pandemia",
    "vacunas",
    "agricultura",
    "minería",
    "energía",
    "agua",
    "saneamiento",
    "ciudades",
    "seguridad",
    "ciudadana",
    "policía",
    "instituciones",
    "transparencia",
    "presupuesto",
    "región",
    "municipios",
    "carreteras",
    "infraestructura",
    "tecnología",
    "innovación",
    "mujeres",
    "niños",
    "jóvenes",
    "familias",
    "pueblos",
    "indígenas",
    "ambiente",
    "bosques",
    "océanos",
    "clima",
    "recursos",
    "crecimiento",
    "mercado",
    "empresas",
    "exportación",
    "turismo",
    "cultura",
    "deporte",
    "vivienda",
    "transporte",
    "digital",
    "descentralización",
    "calidad",
    "acceso",
    "derechos",
    "igualdad",
    "inclusión",
    "fortalecer",
    "garantizar",
    "promover",
    "mejorar",
    "implementar",
    "reducir",
    "ampliar",
    "construir",
    "impulsar",
];

const GLUE: &[&str] = &[
    "de", "la", "el", "y", "para", "en", "los", "las", "con", "del", "por",
];

/// A sentence of 8 to 16 words drawn from a fixed Spanish vocabulary.
pub fn sentence(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(8..=16);
    let mut words = Vec::with_capacity(n);
    for i in 0..n {
        let pool = if i % 3 == 1 { GLUE } else { VOCAB };
        words.push(*pool.choose(rng).unwrap());
    }
    let mut s = words.join(" ");
    if let Some(first) = s.get(0..1) {
        s.replace_range(0..1, &first.to_uppercase());
    }
    s.push('.');
    s
}

pub fn plan_text(seed: u64, sentences: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..sentences {
        out.push_str(&sentence(&mut rng));
        out.push(if i % 6 == 5 { '\n' } else { ' ' });
    }
    out
}

/// `n` plan files named "Partido NN.txt" with `sentences` sentences each.
pub fn write_corpus(dir: &Path, n: usize, sentences: usize) {
    fs::create_dir_all(dir).unwrap();
    for i in 0..n {
        fs::write(
            dir.join(format!("Partido {:02}.txt", i + 1)),
            plan_text(1000 + i as u64, sentences),
        )
        .unwrap();
    }
}

/// The bundled 17-goal catalog.
pub fn sdg_catalog_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sdg-es.json")
}

/// Every file under `dir` (relative path, bytes), sorted by path.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}
