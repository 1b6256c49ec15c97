use finmm::number::ratio;
use finmm::{box_exact, gh_exact, FiniteMMSpace, FiniteMetricSpace};

fn main() -> finmm::Result<()> {
    let x = FiniteMetricSpace::on_line(&[ratio(0, 1), ratio(1, 1)])?;
    let y = FiniteMetricSpace::on_line(&[ratio(0, 1), ratio(6, 5)])?;
    assert_eq!(gh_exact(&x, &y)?.value, ratio(1, 10));
    let b = box_exact(&FiniteMMSpace::uniform(x), &FiniteMMSpace::uniform(y))?;
    assert_eq!(b.value, ratio(1, 5));
    println!("gh = 1/10, box = 1/5");
    Ok(())
}
