//! Debug dumps: motion fields as text and hole masks as PGM images.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fruc_core::interpolation::Accumulator;
use fruc_core::pipeline::PairAnalysis;
use fruc_core::MotionField;

use crate::{Error, Result};

/// One line per block in raster order: `col row dx dy cost`.
pub fn write_motion_field<W: Write>(field: &MotionField, mut sink: W) -> Result<()> {
    for row in 0..field.rows() {
        for col in 0..field.cols() {
            let mv = field.vector(col, row);
            writeln!(sink, "{col} {row} {} {} {}", mv.dx, mv.dy, field.cost(col, row))?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Binary PGM of the top-left `width × height` region of the accumulator's
/// hole mask; 255 marks a hole, 0 a covered pixel.
pub fn write_hole_mask<W: Write>(acc: &Accumulator, width: usize, height: usize, mut sink: W) -> Result<()> {
    if width > acc.width() || height > acc.height() {
        return Err(fruc_core::Error::CropTooLarge {
            current: (acc.width(), acc.height()),
            requested: (width, height),
        }
        .into());
    }
    write!(sink, "P5\n{width} {height}\n255\n")?;
    let mut row = vec![0u8; width];
    for y in 0..height {
        for (x, px) in row.iter_mut().enumerate() {
            *px = if acc.is_hole(x, y) { 255 } else { 0 };
        }
        sink.write_all(&row)?;
    }
    sink.flush()?;
    Ok(())
}

/// Where per-pair dumps go. Either directory may be absent.
#[derive(Debug, Clone, Default)]
pub struct DumpTargets {
    pub motion_dir: Option<PathBuf>,
    pub hole_dir: Option<PathBuf>,
}

impl DumpTargets {
    pub fn is_empty(&self) -> bool {
        self.motion_dir.is_none() && self.hole_dir.is_none()
    }

    /// Creates the target directories.
    pub fn prepare(&self) -> Result<()> {
        for dir in [&self.motion_dir, &self.hole_dir].into_iter().flatten() {
            fs::create_dir_all(dir).map_err(|source| Error::File { path: dir.clone(), source })?;
        }
        Ok(())
    }

    /// Writes the dumps for the frame numbered `index` (1-based, in the
    /// sequence the frame belongs to). Files are named
    /// `mv_<index>_<field>.txt` and `holes_<index>_<direction>.pgm`.
    pub fn write(&self, index: usize, analysis: &PairAnalysis) -> Result<()> {
        let set = &analysis.set;
        if let Some(dir) = &self.motion_dir {
            let fields = [
                ("bilateral", Some(&set.bilateral_field)),
                ("forward", set.forward_field.as_ref()),
                ("backward", set.backward_field.as_ref()),
            ];
            for (name, field) in fields {
                if let Some(field) = field {
                    with_file(&dir.join(format!("mv_{index:04}_{name}.txt")), |w| write_motion_field(field, w))?;
                }
            }
        }
        if let Some(dir) = &self.hole_dir {
            for (name, acc) in [("forward", set.f_f.as_ref()), ("backward", set.f_b.as_ref())] {
                if let Some(acc) = acc {
                    with_file(&dir.join(format!("holes_{index:04}_{name}.pgm")), |w| {
                        write_hole_mask(&acc.luma, analysis.width(), analysis.height(), w)
                    })?;
                }
            }
        }
        Ok(())
    }
}

fn with_file(path: &Path, body: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let file = fs::File::create(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    body(&mut BufWriter::new(file))
}
