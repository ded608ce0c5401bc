// Printed reference tables: (value, c + 1, k) cells in row-major order.

pub const GROWTH: &[(f64, usize, usize)] = &[
    (1.05902, 2, 2),
    (1.30902, 2, 1),
    (1.61803, 2, 0),
    (1.38627, 3, 3),
    (1.71353, 3, 2),
    (2.11803, 3, 1),
    (2.61803, 3, 0),
    (1.81465, 4, 4),
    (2.24303, 4, 3),
    (2.77254, 4, 2),
    (3.42705, 4, 1),
    (4.23607, 4, 0),
    (2.37541, 5, 5),
    (2.93617, 5, 4),
    (3.62931, 5, 3),
    (4.48607, 5, 2),
    (5.54508, 5, 1),
    (6.8541, 5, 0),
    (3.10945, 6, 6),
    (3.8435, 6, 5),
    (4.75082, 6, 4),
    (5.87234, 6, 3),
    (7.25861, 6, 2),
    (8.97214, 6, 1),
    (4.07033, 7, 7),
    (5.0312, 7, 6),
    (6.21891, 7, 5),
    (7.68699, 7, 4),
    (9.50164, 7, 3),
    (11.7447, 7, 2),
    (5.32813, 8, 8),
    (6.58593, 8, 7),
    (8.14065, 8, 6),
    (10.0624, 8, 5),
    (12.4378, 8, 4),
    (15.374, 8, 3),
    (6.97461, 9, 9),
    (8.62109, 9, 8),
    (10.6563, 9, 7),
    (13.1719, 9, 6),
    (16.2813, 9, 5),
    (20.1248, 9, 4),
    (9.12988, 10, 10),
    (11.2852, 10, 9),
    (13.9492, 10, 8),
    (17.2422, 10, 7),
    (21.3125, 10, 6),
    (26.3437, 10, 5),
    (11.9512, 11, 11),
    (14.7725, 11, 10),
    (18.2598, 11, 9),
    (22.5703, 11, 8),
    (27.8984, 11, 7),
    (34.4844, 11, 6),
];

pub const GROWTH_SCALED: &[(f64, usize, usize)] = &[
    (1.0, 2, 2),
    (1.23607, 2, 1),
    (1.52786, 2, 0),
    (1.30902, 3, 3),
    (1.61803, 3, 2),
    (2.0, 3, 1),
    (2.47214, 3, 0),
    (1.71353, 4, 4),
    (2.11803, 4, 3),
    (2.61803, 4, 2),
    (3.23607, 4, 1),
    (4.0, 4, 0),
    (2.24303, 5, 5),
    (2.77254, 5, 4),
    (3.42705, 5, 3),
    (4.23607, 5, 2),
    (5.23607, 5, 1),
    (6.47214, 5, 0),
    (2.93617, 6, 6),
    (3.62931, 6, 5),
    (4.48607, 6, 4),
    (5.54508, 6, 3),
    (6.8541, 6, 2),
    (8.47214, 6, 1),
    (3.8435, 7, 7),
    (4.75082, 7, 6),
    (5.87234, 7, 5),
    (7.25861, 7, 4),
    (8.97214, 7, 3),
    (11.0902, 7, 2),
    (5.0312, 8, 8),
    (6.21891, 8, 7),
    (7.68699, 8, 6),
    (9.50164, 8, 5),
    (11.7447, 8, 4),
    (14.5172, 8, 3),
    (6.58593, 9, 9),
    (8.14065, 9, 8),
    (10.0624, 9, 7),
    (12.4378, 9, 6),
    (15.374, 9, 5),
    (19.0033, 9, 4),
    (8.62109, 10, 10),
    (10.6563, 10, 9),
    (13.1719, 10, 8),
    (16.2813, 10, 7),
    (20.1248, 10, 6),
    (24.8756, 10, 5),
    (11.2852, 11, 11),
    (13.9492, 11, 10),
    (17.2422, 11, 9),
    (21.3125, 11, 8),
    (26.3437, 11, 7),
    (32.5626, 11, 6),
];

pub const DEVIATION: [[f64; 8]; 8] = [
    [1.000000, 0.8090170, 0.8726780, 0.8472136, 0.8567627, 0.8530900, 0.8544891, 0.8539542],
    [1.236068, 1.000000, 1.078689, 1.047214, 1.059017, 1.054477, 1.056207, 1.055545],
    [1.145898, 0.9270510, 1.000000, 0.9708204, 0.9817627, 0.9775541, 0.9791574, 0.9785444],
    [1.180340, 0.9549150, 1.030057, 1.000000, 1.011271, 1.006936, 1.008588, 1.007956],
    [1.167184, 0.9442719, 1.018576, 0.9888544, 1.000000, 0.9957132, 0.9973463, 0.9967219],
    [1.172209, 0.9483372, 1.022961, 0.9931116, 1.004305, 1.000000, 1.001640, 1.001013],
    [1.170290, 0.9467844, 1.021286, 0.9914855, 1.002661, 0.9983626, 1.000000, 0.9993739],
    [1.171023, 0.9473775, 1.021926, 0.9921066, 1.003289, 0.9989880, 1.000626, 1.000000],
];
