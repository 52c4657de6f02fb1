//! Reference observed and predicted histograms for the hematocrit data, ten units of six
//! bins each, as `[lower, upper]` bounds rounded to two decimals.

#![allow(dead_code)]

pub const OBSERVED: [[[f64; 2]; 6]; 10] = [
    [[33.29, 35.41], [35.41, 36.11], [36.11, 36.82], [36.82, 37.52], [37.52, 38.04], [38.04, 39.61]],
    [[36.69, 39.11], [39.11, 39.97], [39.97, 40.83], [40.83, 41.69], [41.69, 42.54], [42.54, 45.12]],
    [[36.69, 40.26], [40.26, 41.45], [41.45, 42.64], [42.64, 43.85], [43.85, 45.06], [45.06, 48.68]],
    [[36.38, 39.75], [39.75, 40.87], [40.87, 41.96], [41.96, 43.05], [43.05, 44.14], [44.14, 47.41]],
    [[39.19, 42.69], [42.69, 43.86], [43.86, 45.03], [45.03, 46.19], [46.19, 47.36], [47.36, 50.86]],
    [[39.7, 43.17], [43.17, 44.32], [44.32, 44.81], [44.81, 45.29], [45.29, 45.78], [45.78, 47.24]],
    [[41.56, 44.11], [44.11, 44.95], [44.95, 45.8], [45.8, 46.65], [46.65, 47.19], [47.19, 48.81]],
    [[38.4, 40.34], [40.34, 40.99], [40.99, 41.64], [41.64, 42.28], [42.28, 42.93], [42.93, 45.22]],
    [[28.83, 32.86], [32.86, 34.21], [34.21, 35.55], [35.55, 36.84], [36.84, 38.12], [38.12, 41.98]],
    [[44.48, 46.9], [46.9, 47.7], [47.7, 48.51], [48.51, 49.31], [49.31, 50.12], [50.12, 52.53]],
];

pub const DSD: [[[f64; 2]; 6]; 10] = [
    [[33.84, 35.7], [35.7, 36.32], [36.32, 36.73], [36.73, 37.13], [37.13, 37.56], [37.56, 38.85]],
    [[35.16, 38.04], [38.04, 39.0], [39.0, 39.96], [39.96, 40.67], [40.67, 41.38], [41.38, 43.51]],
    [[35.45, 42.27], [42.27, 43.38], [43.38, 44.5], [44.5, 45.61], [45.61, 46.72], [46.72, 50.46]],
    [[35.8, 40.08], [40.08, 41.5], [41.5, 42.92], [42.92, 43.81], [43.81, 44.7], [44.7, 47.37]],
    [[39.68, 42.52], [42.52, 43.64], [43.64, 44.75], [44.75, 45.86], [45.86, 46.97], [46.97, 50.25]],
    [[40.93, 42.92], [42.92, 43.58], [43.58, 44.04], [44.04, 44.51], [44.51, 44.99], [44.99, 46.45]],
    [[42.67, 43.86], [43.86, 44.26], [44.26, 44.65], [44.65, 45.22], [45.22, 45.78], [45.78, 47.48]],
    [[39.26, 40.74], [40.74, 41.24], [41.24, 41.72], [41.72, 42.2], [42.2, 42.79], [42.79, 44.54]],
    [[27.66, 33.54], [33.54, 35.5], [35.5, 36.7], [36.7, 37.91], [37.91, 39.2], [39.2, 43.08]],
    [[45.85, 47.48], [47.48, 48.03], [48.03, 48.58], [48.58, 49.13], [49.13, 49.68], [49.68, 51.33]],
];

pub const BD: [[[f64; 2]; 6]; 10] = [
    [[34.33, 35.87], [35.87, 36.38], [36.38, 36.7], [36.7, 37.02], [37.02, 37.35], [37.35, 38.31]],
    [[36.0, 38.37], [38.37, 39.16], [39.16, 39.95], [39.95, 40.49], [40.49, 41.03], [41.03, 42.64]],
    [[36.98, 42.74], [42.74, 43.62], [43.62, 44.51], [44.51, 45.39], [45.39, 46.28], [46.28, 48.93]],
    [[36.98, 40.55], [40.55, 41.74], [41.74, 42.93], [42.93, 43.58], [43.58, 44.23], [44.23, 46.18]],
    [[40.78, 42.99], [42.99, 43.87], [43.87, 44.76], [44.76, 45.64], [45.64, 46.53], [46.53, 49.19]],
    [[41.5, 43.14], [43.14, 43.68], [43.68, 44.05], [44.05, 44.42], [44.42, 44.79], [44.79, 45.9]],
    [[43.18, 44.07], [44.07, 44.37], [44.37, 44.66], [44.66, 45.13], [45.13, 45.6], [45.6, 47.0]],
    [[39.8, 40.95], [40.95, 41.33], [41.33, 41.72], [41.72, 42.1], [42.1, 42.58], [42.58, 44.0]],
    [[29.2, 34.09], [34.09, 35.72], [35.72, 36.68], [36.68, 37.63], [37.63, 38.59], [38.59, 41.47]],
    [[46.43, 47.73], [47.73, 48.17], [48.17, 48.61], [48.61, 49.05], [49.05, 49.48], [49.48, 50.8]],
];

pub const VI: [[[f64; 2]; 6]; 10] = [
    [[33.79, 35.7], [35.7, 36.34], [36.34, 36.73], [36.73, 37.13], [37.13, 37.53], [37.53, 38.73]],
    [[35.13, 38.06], [38.06, 39.04], [39.04, 40.02], [40.02, 40.69], [40.69, 41.36], [41.36, 43.35]],
    [[35.29, 42.42], [42.42, 43.51], [43.51, 44.61], [44.61, 45.71], [45.71, 46.8], [46.8, 50.1]],
    [[35.71, 40.13], [40.13, 41.61], [41.61, 43.08], [43.08, 43.89], [43.89, 44.69], [44.69, 47.12]],
    [[39.8, 42.54], [42.54, 43.64], [43.64, 44.74], [44.74, 45.83], [45.83, 46.93], [46.93, 50.22]],
    [[40.92, 42.95], [42.95, 43.62], [43.62, 44.08], [44.08, 44.54], [44.54, 44.99], [44.99, 46.47]],
    [[42.76, 43.87], [43.87, 44.24], [44.24, 44.61], [44.61, 45.19], [45.19, 45.77], [45.77, 47.51]],
    [[39.31, 40.74], [40.74, 41.22], [41.22, 41.7], [41.7, 42.17], [42.17, 42.76], [42.76, 44.52]],
    [[27.54, 33.59], [33.59, 35.61], [35.61, 36.8], [36.8, 37.9], [37.9, 39.18], [38.18, 42.74]],
    [[45.91, 47.51], [47.51, 48.06], [48.06, 48.6], [48.6, 49.14], [49.14, 49.68], [49.68, 51.31]],
];
