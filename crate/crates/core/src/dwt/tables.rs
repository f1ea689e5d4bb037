use core::f64::consts::FRAC_1_SQRT_2;

const HAAR_DEC_LO: [f64; 2] = [
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
];

const DB2_DEC_LO: [f64; 4] = [
    -0.12940952255126037,
    0.2241438680420134,
    0.8365163037378079,
    0.48296291314453416,
];

const SYM3_DEC_LO: [f64; 6] = [
    0.03522629188570953,
    -0.08544127388202666,
    -0.13501102001025458,
    0.45987750211849154,
    0.8068915093110925,
    0.33267055295008263,
];

const COIF1_DEC_LO: [f64; 6] = [
    -0.015655728135791993,
    -0.07273261951252645,
    0.3848648468648578,
    0.8525720202116004,
    0.3378976624574818,
    -0.07273261951252645,
];

// Standard 62-tap discrete Meyer lowpass, projected onto the nearest filter with
// exact double-shift orthonormality and a zero at Nyquist (max tap change 8.1e-4).
const DMEY_DEC_LO: [f64; 62] = [
    7.406152332341851e-07,
    1.5409041140678018e-06,
    -6.668638412665882e-06,
    -7.173087617584997e-06,
    1.0863917461889524e-05,
    5.24001083412063e-06,
    4.441057679509083e-06,
    5.8466244229968e-07,
    -3.0266480600215388e-05,
    2.3872688760353803e-06,
    0.00010646785877614915,
    4.24970639915508e-05,
    -0.0003004545174480631,
    -0.0001236748128435907,
    0.0003798569493644273,
    0.0006475142935501094,
    -0.0004305862980340403,
    -0.0027003850317746728,
    0.002104408200490181,
    0.006088411945284009,
    -0.0063539770295076795,
    -0.011052487833726882,
    0.015198411561640937,
    0.017449517174989826,
    -0.03209701469090374,
    -0.02431632798256821,
    0.06363475310381063,
    0.030654359073950383,
    -0.13271327154226736,
    -0.035033019800894113,
    0.44407088299224207,
    0.7437777523562109,
    0.4440710773060872,
    -0.03503302041012193,
    -0.13271338341152022,
    0.030654343766298855,
    0.06363415112319643,
    -0.024316358342218448,
    -0.03209843278138322,
    0.01744948714031741,
    0.015198039394168281,
    -0.011052477265030242,
    -0.006356505189642771,
    0.006088435067706238,
    0.0020976608245644127,
    -0.0027002709276469088,
    -0.00042046757470641586,
    0.0006469003482513268,
    0.0002353549907155968,
    -0.00012077529052557774,
    -0.00013428579575458434,
    5.737292705980572e-05,
    3.530414091554313e-05,
    -4.222556329352089e-06,
    -1.309486797483808e-05,
    -4.271270135217793e-06,
    -3.3091748991597573e-06,
    -1.6436796257977794e-06,
    -6.14904062924363e-06,
    7.620383477351609e-06,
    2.234183883813333e-06,
    -1.0749097495968586e-06,
];

const BIOR1_3_DEC_LO: [f64; 6] = [
    -0.08838834764831845,
    0.08838834764831845,
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    0.08838834764831845,
    -0.08838834764831845,
];

const BIOR1_3_DEC_HI: [f64; 6] = [
    -0.0,
    0.0,
    -FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    -0.0,
    0.0,
];

const BIOR1_3_REC_LO: [f64; 6] = [
    0.0,
    0.0,
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    0.0,
    0.0,
];

const BIOR1_3_REC_HI: [f64; 6] = [
    -0.08838834764831845,
    -0.08838834764831845,
    FRAC_1_SQRT_2,
    -FRAC_1_SQRT_2,
    0.08838834764831845,
    0.08838834764831845,
];

const RBIO1_3_DEC_LO: [f64; 6] = [
    0.0,
    0.0,
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    0.0,
    0.0,
];

const RBIO1_3_DEC_HI: [f64; 6] = [
    0.08838834764831845,
    0.08838834764831845,
    -FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    -0.08838834764831845,
    -0.08838834764831845,
];

const RBIO1_3_REC_LO: [f64; 6] = [
    -0.08838834764831845,
    0.08838834764831845,
    FRAC_1_SQRT_2,
    FRAC_1_SQRT_2,
    0.08838834764831845,
    -0.08838834764831845,
];

const RBIO1_3_REC_HI: [f64; 6] = [
    0.0,
    -0.0,
    FRAC_1_SQRT_2,
    -FRAC_1_SQRT_2,
    0.0,
    -0.0,
];
