//! Reference values computed with 40-digit arithmetic (mpmath `besselj`, `gamma`).
#![allow(clippy::excessive_precision)]

use hankel_core::special_fn::{bessel_j, gamma, gamma_real};
use hankel_core::Complex64;

const BESSEL_J: &[(f64, f64, f64)] = &[
    (-0.49, 0.1, 2.4843847859500279877),
    (-0.49, 1.0, 0.44357868053813393577),
    (-0.49, 5.0, 0.095487552615189673028),
    (-0.49, 7.9, -0.0084262830330144112925),
    (-0.49, 8.1, -0.063829834388929441569),
    (-0.49, 12.0, 0.19234383719101677316),
    (-0.49, 20.0, 0.075395850768370474591),
    (-0.49, 30.0, 0.0201829235760396648),
    (-0.49, 39.0, 0.036012771765593031835),
    (-0.49, 41.0, -0.12332825681747700529),
    (-0.49, 60.0, -0.098588145102095137114),
    (-0.49, 100.0, 0.068157924282091440148),
    (0.0, 0.1, 0.997501562066040032),
    (0.0, 1.0, 0.76519768655796655145),
    (0.0, 5.0, -0.17759677131433830435),
    (0.0, 7.9, 0.19436184484127823969),
    (0.0, 8.1, 0.1475174540443776703),
    (0.0, 12.0, 0.047689310796833536624),
    (0.0, 20.0, 0.16702466434058315473),
    (0.0, 30.0, -0.086367983581040211336),
    (0.0, 39.0, 0.11135769795486712329),
    (0.0, 41.0, -0.10074578912447979774),
    (0.0, 60.0, -0.091471804089061869531),
    (0.0, 100.0, 0.019985850304223122424),
    (0.3, 0.1, 0.45272574599459660724),
    (0.3, 1.0, 0.74022247928102045347),
    (0.3, 5.0, -0.29682911012576075751),
    (0.3, 7.9, 0.26648449385751421104),
    (0.3, 8.1, 0.23880625475427755761),
    (0.3, 12.0, -0.058942057108976803358),
    (0.3, 20.0, 0.17731275838228064709),
    (0.3, 30.0, -0.13011079142417547186),
    (0.3, 39.0, 0.12764667892469968633),
    (0.3, 41.0, -0.056599237694292788039),
    (0.3, 60.0, -0.060064602231185257245),
    (0.3, 100.0, -0.017225645932780616608),
    (1.0, 0.1, 0.049937526036242000321),
    (1.0, 1.0, 0.44005058574493351596),
    (1.0, 5.0, -0.32757913759146522204),
    (1.0, 7.9, 0.21917939992175120327),
    (1.0, 8.1, 0.24760776698159287663),
    (1.0, 12.0, -0.22344710449062761237),
    (1.0, 20.0, 0.066833124175850045579),
    (1.0, 30.0, -0.11875106261662293652),
    (1.0, 39.0, 0.06405610368868934664),
    (1.0, 41.0, 0.072101261604979386451),
    (1.0, 60.0, 0.046598383758166317869),
    (1.0, 100.0, -0.077145352014112158033),
    (2.5, 0.1, 0.00016808871900334129365),
    (2.5, 1.0, 0.049496810228477942271),
    (2.5, 5.0, 0.24037720111131735285),
    (2.5, 7.9, -0.26498382625804026946),
    (2.5, 8.1, -0.23418603531231525012),
    (2.5, 12.0, 0.072422673831809521857),
    (2.5, 20.0, -0.17258019384387642416),
    (2.5, 30.0, 0.14120285879928212036),
    (2.5, 39.0, -0.1255158295474471909),
    (2.5, 41.0, 0.028732747148653321328),
    (2.5, 60.0, 0.036276530818286875105),
    (2.5, 100.0, 0.038325919332375405594),
    (5.0, 0.1, 2.6030817909644415564e-9),
    (5.0, 1.0, 0.00024975773021123443138),
    (5.0, 5.0, 0.26114054612017009005),
    (5.0, 7.9, 0.20747350940067680728),
    (5.0, 8.1, 0.16322151022791507082),
    (5.0, 12.0, -0.073470963101658581266),
    (5.0, 20.0, 0.15116976798239497461),
    (5.0, 30.0, -0.14324029551207707699),
    (5.0, 39.0, 0.0949379660288967773),
    (5.0, 41.0, 0.039816928802202041258),
    (5.0, 60.0, 0.02745474422834409975),
    (5.0, 100.0, -0.074195736964513920834),
    (10.0, 0.1, 2.690532895434217073e-20),
    (10.0, 1.0, 2.630615123687453207e-10),
    (10.0, 5.0, 0.0014678026473104741311),
    (10.0, 7.9, 0.055869872504109695978),
    (10.0, 8.1, 0.065942923604934146808),
    (10.0, 12.0, 0.30047603527126931073),
    (10.0, 20.0, 0.18648255802394508321),
    (10.0, 30.0, -0.12987689399858876819),
    (10.0, 39.0, 0.029651335518514117341),
    (10.0, 41.0, 0.10470555806343182178),
    (10.0, 60.0, 0.097177143328071091839),
    (10.0, 100.0, -0.054732176935472014742),
];
const GAMMA: &[(f64, f64, f64, f64)] = &[
    (0.3, 0.0, 2.9915689876875907446, 0.0),
    (0.7, 0.0, 1.298055332647557856, 0.0),
    (4.25, 0.0, 8.2850851418352201659, 0.0),
    (17.5, 0.0, 85634974475162.063871, 0.0),
    (49.0, 0.0, 1.2413915592536072671e+61, 0.0),
    (-3.5, 0.0, 0.27008820585226910892, 0.0),
    (-0.2, 0.1, -4.802999655922725265, -1.8511962618091262527),
    (0.5, 0.5, 0.81816399954174739408, -0.76331382871398261667),
    (
        2.0,
        -3.0,
        -0.082395272665611883674,
        -0.091774287435259314596,
    ),
    (
        -7.3,
        2.2,
        4.1055659002646976056e-7,
        -8.1856586192433085814e-7,
    ),
    (
        30.0,
        20.0,
        1.5609654275290077167e+28,
        -1.0795336401868512377e+27,
    ),
    (0.001, 0.0, 999.4237724845954453, 0.0),
];

#[test]
fn bessel_j_matches_high_precision_reference() {
    let mut worst = 0.0f64;
    for &(alpha, z, want) in BESSEL_J {
        let got = bessel_j(alpha, z);
        let err = (got - want).abs();
        worst = worst.max(err);
        assert!(
            err <= 1e-12,
            "J_{alpha}({z}) = {got}, want {want}, err {err:e}"
        );
    }
    println!("worst absolute Bessel error: {worst:e}");
}

#[test]
fn gamma_matches_high_precision_reference() {
    for &(re, im, want_re, want_im) in GAMMA {
        let got = gamma(Complex64::new(re, im)).unwrap();
        let want = Complex64::new(want_re, want_im);
        let rel = (got - want).norm() / want.norm();
        assert!(
            rel <= 1e-13,
            "Gamma({re}+{im}i) = {got}, want {want}, rel {rel:e}"
        );
        if im == 0.0 {
            let real = gamma_real(re);
            assert!(
                (real - want_re).abs() <= 1e-13 * want_re.abs(),
                "real Gamma({re})"
            );
        }
    }
}
