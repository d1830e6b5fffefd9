//! Published per-dataset scores used as fixtures for the Rank statistic.

#![allow(dead_code)]

/// Column order of the average-score tables.
pub const METHODS: [&str; 6] = ["chm", "bat", "bfo", "pso", "fpa", "sa"];
/// Column order of the max-accuracy table, which adds the plug-in baseline.
pub const METHODS_WITH_PLUGIN: [&str; 7] = ["chm", "plugin", "bat", "bfo", "pso", "fpa", "sa"];

/// Max test accuracy.
pub const MAX_ACCURACY: [(&str, &[f64]); 16] = [
    ("Iris", &[0.967, 0.933, 0.967, 0.933, 0.933, 0.967, 0.933]),
    ("Banknote", &[1.0, 1.0, 1.0, 1.0, 1.0, 0.996, 1.0]),
    ("Ghost", &[0.653, 0.613, 0.64, 0.613, 0.653, 0.56, 0.613]),
    ("Cancer", &[0.965, 0.974, 0.965, 0.956, 0.965, 0.956, 0.965]),
    ("Wine", &[0.944, 0.972, 1.0, 0.972, 0.944, 0.889, 0.917]),
    ("ILPD", &[0.672, 0.647, 0.664, 0.69, 0.69, 0.681, 0.681]),
    ("Glass", &[0.674, 0.721, 0.698, 0.581, 0.605, 0.674, 0.651]),
    ("Parkinson", &[0.949, 0.974, 0.949, 0.949, 0.897, 0.949, 0.949]),
    ("E. coli", &[0.821, 0.806, 0.866, 0.761, 0.806, 0.776, 0.776]),
    ("Heart", &[0.55, 0.483, 0.467, 0.467, 0.467, 0.45, 0.467]),
    ("Climate", &[0.88, 0.861, 0.88, 0.861, 0.87, 0.861, 0.889]),
    ("Blood transfusion", &[0.727, 0.673, 0.707, 0.707, 0.707, 0.7, 0.707]),
    ("Thyroid", &[0.977, 0.93, 0.953, 0.953, 0.953, 0.953, 0.953]),
    ("Monks", &[0.651, 0.482, 0.627, 0.663, 0.639, 0.651, 0.651]),
    ("Vehicle", &[0.676, 0.688, 0.665, 0.688, 0.688, 0.665, 0.671]),
    ("Pima", &[0.773, 0.63, 0.76, 0.773, 0.76, 0.76, 0.786]),
];

/// Average test accuracy.
pub const AVG_ACCURACY: [(&str, &[f64]); 16] = [
    ("Iris", &[0.927, 0.897, 0.927, 0.917, 0.92, 0.927]),
    ("Banknote", &[0.993, 0.986, 0.97, 0.993, 0.949, 0.963]),
    ("Ghost", &[0.548, 0.521, 0.524, 0.533, 0.484, 0.54]),
    ("Cancer", &[0.954, 0.947, 0.946, 0.952, 0.939, 0.945]),
    ("Wine", &[0.789, 0.831, 0.878, 0.8, 0.767, 0.844]),
    ("ILPD", &[0.64, 0.636, 0.651, 0.659, 0.65, 0.65]),
    ("Glass", &[0.556, 0.514, 0.463, 0.498, 0.53, 0.407]),
    ("Parkinson", &[0.91, 0.918, 0.903, 0.846, 0.892, 0.91]),
    ("E. coli", &[0.734, 0.722, 0.631, 0.627, 0.67, 0.672]),
    ("Heart", &[0.437, 0.398, 0.39, 0.398, 0.398, 0.397]),
    ("Climate", &[0.855, 0.852, 0.847, 0.854, 0.847, 0.845]),
    ("Blood transfusion", &[0.689, 0.695, 0.692, 0.691, 0.688, 0.693]),
    ("Thyroid", &[0.953, 0.923, 0.926, 0.93, 0.928, 0.921]),
    ("Monks", &[0.577, 0.564, 0.62, 0.554, 0.576, 0.599]),
    ("Vehicle", &[0.641, 0.652, 0.636, 0.642, 0.651, 0.626]),
    ("Pima", &[0.748, 0.716, 0.732, 0.717, 0.718, 0.723]),
];

/// Average test precision.
pub const AVG_PRECISION: [(&str, &[f64]); 16] = [
    ("Iris", &[0.928, 0.899, 0.927, 0.916, 0.921, 0.927]),
    ("Banknote", &[0.993, 0.986, 0.969, 0.992, 0.948, 0.963]),
    ("Ghost", &[0.565, 0.524, 0.544, 0.537, 0.498, 0.551]),
    ("Cancer", &[0.954, 0.947, 0.946, 0.95, 0.94, 0.945]),
    ("Wine", &[0.792, 0.844, 0.887, 0.812, 0.787, 0.853]),
    ("ILPD", &[0.57, 0.576, 0.588, 0.594, 0.585, 0.585]),
    ("Glass", &[0.536, 0.519, 0.355, 0.435, 0.494, 0.332]),
    ("Parkinson", &[0.878, 0.887, 0.865, 0.798, 0.854, 0.874]),
    ("E. coli", &[0.663, 0.595, 0.423, 0.556, 0.552, 0.513]),
    ("Heart", &[0.294, 0.229, 0.229, 0.237, 0.237, 0.233]),
    ("Climate", &[0.471, 0.49, 0.505, 0.497, 0.505, 0.488]),
    ("Blood transfusion", &[0.552, 0.562, 0.561, 0.555, 0.553, 0.56]),
    ("Thyroid", &[0.959, 0.932, 0.922, 0.914, 0.933, 0.943]),
    ("Monks", &[0.57, 0.557, 0.616, 0.544, 0.57, 0.592]),
    ("Vehicle", &[0.633, 0.647, 0.635, 0.638, 0.643, 0.617]),
    ("Pima", &[0.725, 0.686, 0.706, 0.688, 0.69, 0.696]),
];

/// Average test recall.
pub const AVG_RECALL: [(&str, &[f64]); 16] = [
    ("Iris", &[0.927, 0.897, 0.927, 0.917, 0.92, 0.927]),
    ("Banknote", &[0.994, 0.987, 0.97, 0.993, 0.949, 0.963]),
    ("Ghost", &[0.549, 0.523, 0.525, 0.535, 0.486, 0.542]),
    ("Cancer", &[0.948, 0.939, 0.939, 0.946, 0.929, 0.936]),
    ("Wine", &[0.788, 0.831, 0.881, 0.802, 0.771, 0.847]),
    ("ILPD", &[0.573, 0.583, 0.594, 0.6, 0.592, 0.59]),
    ("Glass", &[0.457, 0.509, 0.343, 0.417, 0.455, 0.298]),
    ("Parkinson", &[0.897, 0.906, 0.905, 0.815, 0.888, 0.913]),
    ("E. coli", &[0.504, 0.503, 0.37, 0.381, 0.442, 0.371]),
    ("Heart", &[0.251, 0.211, 0.208, 0.214, 0.208, 0.206]),
    ("Climate", &[0.481, 0.495, 0.508, 0.501, 0.508, 0.486]),
    ("Blood transfusion", &[0.546, 0.555, 0.555, 0.548, 0.548, 0.553]),
    ("Thyroid", &[0.916, 0.845, 0.865, 0.89, 0.865, 0.835]),
    ("Monks", &[0.568, 0.556, 0.613, 0.544, 0.57, 0.589]),
    ("Vehicle", &[0.642, 0.653, 0.638, 0.644, 0.653, 0.628]),
    ("Pima", &[0.708, 0.669, 0.686, 0.677, 0.674, 0.675]),
];

/// Rank rows as printed under each table.
pub const RANK_MAX_ACCURACY: [usize; 7] = [6, 5, 4, 4, 4, 1, 3];
pub const RANK_AVG_ACCURACY: [usize; 6] = [10, 3, 3, 2, 0, 1];
pub const RANK_AVG_PRECISION: [usize; 6] = [9, 3, 3, 1, 1, 0];
pub const RANK_AVG_RECALL: [usize; 6] = [8, 3, 5, 1, 2, 2];

pub fn as_scores(table: &[(&str, &[f64])]) -> Vec<Vec<Option<f64>>> {
    table.iter().map(|(_, row)| row.iter().map(|&v| Some(v)).collect()).collect()
}
