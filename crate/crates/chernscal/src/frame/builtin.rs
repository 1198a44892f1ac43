//! Bundled model corpus: a flat Kähler torus, the strictly almost Kähler
//! Kodaira-Thurston nilmanifold, the integrable non-Kähler Hopf structure on
//! su(2)⊕ℝ, and the nearly Kähler 3-symmetric structure on S³×S³.

const TORUS4: &str = include_str!("../../data/torus4.json");
const KODAIRA_THURSTON: &str = include_str!("../../data/kodaira-thurston.json");
const HOPF: &str = include_str!("../../data/hopf.json");
const S3S3_NK: &str = include_str!("../../data/s3s3-nk.json");

pub fn builtin_model_names() -> &'static [&'static str] {
    &["torus4", "kodaira-thurston", "hopf", "s3s3-nk"]
}

pub fn builtin_model(name: &str) -> Option<&'static str> {
    match name {
        "torus4" => Some(TORUS4),
        "kodaira-thurston" => Some(KODAIRA_THURSTON),
        "hopf" => Some(HOPF),
        "s3s3-nk" => Some(S3S3_NK),
        _ => None,
    }
}
