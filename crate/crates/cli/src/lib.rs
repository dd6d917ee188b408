//! Command-line tools, presets and file formats for bullet-model diagrams.

pub mod app;
pub mod document;
pub mod error;
pub mod presets;
pub mod svg;

pub use app::run;
pub use document::{decode_diagram, encode_diagram, DiagramDocument, DIAGRAM_SCHEMA};
pub use error::{CliError, CliResult};
pub use presets::{preset, registry, Preset, DEFAULT_ALPHA};
pub use svg::{render_svg, SvgStyle};
