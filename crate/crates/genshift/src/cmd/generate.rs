use anyhow::{bail, Context, Result};
use genshift_core::pipeline::add_vertex_noise;
use genshift_core::shapes;

use super::write_mesh;
use crate::cli::{GenerateArgs, ShapeArg};
use crate::io::{write_pnm, Image, PnmEncoding};

pub fn run(args: &GenerateArgs) -> Result<()> {
    if args.noise < 0.0 || !args.noise.is_finite() {
        bail!("--noise must be a nonnegative number, got {}", args.noise);
    }
    let n = args.size;
    let mesh = match args.shape {
        ShapeArg::Image => {
            if n == 0 {
                bail!("--size must be at least 1");
            }
            let (grid, signal) = shapes::test_image(n, n, args.noise, args.seed);
            return write_pnm(&args.output, &Image { grid, signal }, PnmEncoding::Plain)
                .with_context(|| format!("writing {}", args.output.display()));
        }
        ShapeArg::Cube if n >= 1 => shapes::subdivided_cube(n),
        ShapeArg::Icosphere if n <= 7 => shapes::icosphere(n, 1.0),
        ShapeArg::Fibonacci if n >= 4 => shapes::fibonacci_sphere(n, 1.0),
        ShapeArg::Wedge if n >= 1 => shapes::wedge(n),
        _ => bail!("--size {n} is out of range for this shape"),
    };
    let mesh = add_vertex_noise(&mesh, args.noise, args.seed)?;
    write_mesh(&args.output, &mesh)
}
