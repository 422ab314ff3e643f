use super::quad::{quad_ray, quad_segment, CompensatedSum};
use crate::{Complex, Error, Result};

/// One piece of an integration path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line {
        from: Complex,
        to: Complex,
    },
    /// from + t·dir for t ≥ 0
    Ray {
        from: Complex,
        dir: Complex,
    },
}

impl Segment {
    fn start(&self) -> Complex {
        match *self {
            Segment::Line { from, .. } | Segment::Ray { from, .. } => from,
        }
    }
}

/// Connected piecewise-straight path starting at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    segments: Vec<Segment>,
}

impl Contour {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let first = segments.first().ok_or_else(|| Error::Domain("empty contour".into()))?;
        if first.start().norm() != 0.0 {
            return Err(Error::Domain("contour must start at 0".into()));
        }
        for w in segments.windows(2) {
            match w[0] {
                Segment::Line { to, .. } if (to - w[1].start()).norm() == 0.0 => {}
                Segment::Line { .. } => return Err(Error::Domain("contour is not connected".into())),
                Segment::Ray { .. } => return Err(Error::Domain("a ray must be the last segment".into())),
            }
        }
        Ok(Contour { segments })
    }

    /// Vertical drop to -i·depth followed by the horizontal half-line.
    pub fn below_real_axis(depth: f64) -> Self {
        let corner = Complex::new(0.0, -depth);
        Contour {
            segments: vec![
                Segment::Line { from: Complex::new(0.0, 0.0), to: corner },
                Segment::Ray { from: corner, dir: Complex::new(1.0, 0.0) },
            ],
        }
    }

    /// Single half-line from 0 in direction e^{iθ}.
    pub fn ray(theta: f64) -> Self {
        Contour { segments: vec![Segment::Ray { from: Complex::new(0.0, 0.0), dir: Complex::from_polar(1.0, theta) }] }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// ∫ f along the contour; half-lines use `scale` as their first panel length.
    pub fn integrate(&self, f: &dyn Fn(Complex) -> Complex, scale: f64, abs_tol: f64) -> Result<Complex> {
        let mut acc = CompensatedSum::default();
        let share = abs_tol / self.segments.len() as f64;
        for seg in &self.segments {
            let v = match *seg {
                Segment::Line { from, to } => quad_segment(f, from, to, share)?,
                Segment::Ray { from, dir } => quad_ray(f, from, dir, scale, share)?,
            };
            acc.add(v);
        }
        Ok(acc.value())
    }
}
