//! JSON schemas for every file the tool reads or writes, compiled in.

use crate::args::SchemaName;

pub fn text(name: SchemaName) -> &'static str {
    match name {
        SchemaName::Manifest => include_str!("../schemas/manifest.schema.json"),
        SchemaName::Scenario => include_str!("../schemas/scenario.schema.json"),
        SchemaName::Spectrum => include_str!("../schemas/spectrum.schema.json"),
        SchemaName::Spectrogram => include_str!("../schemas/spectrogram.schema.json"),
        SchemaName::Envelopes => include_str!("../schemas/envelopes.schema.json"),
        SchemaName::Eit => include_str!("../schemas/eit.schema.json"),
        SchemaName::Report => include_str!("../schemas/report.schema.json"),
        SchemaName::Roundtrip => include_str!("../schemas/roundtrip.schema.json"),
        SchemaName::Wigner => include_str!("../schemas/wigner.schema.json"),
    }
}
