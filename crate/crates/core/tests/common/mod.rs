#![allow(dead_code)]

/// `(offset j, a, b, bound)`: `B_N(N+j) = aN+b`, valid for `N ≥ bound`.
/// Offsets 1..=24 hold for both variants; 25..=69 only with zero extension.
pub const APPENDIX: [(i64, i64, i64, i64); 69] = [
    (1, 0, 6, 3),
    (2, 1, 1, 5),
    (3, 1, 2, 4),
    (4, 1, 3, 3),
    (5, 0, 9, 4),
    (6, 1, 4, 4),
    (7, 1, 5, 4),
    (8, 1, 6, 4),
    (9, 0, 12, 5),
    (10, 1, 7, 5),
    (11, 1, 8, 5),
    (12, 1, 9, 5),
    (13, 0, 15, 6),
    (14, 1, 10, 6),
    (15, 1, 11, 6),
    (16, 0, 17, 6),
    (17, 1, 13, 7),
    (18, 0, 18, 7),
    (19, 1, 13, 6),
    (20, 1, 15, 7),
    (21, 1, 16, 8),
    (22, 0, 22, 9),
    (23, 0, 21, 8),
    (24, 2, 11, 8),
    (25, 2, 5, 14),
    (26, 0, 9, 21),
    (27, 0, 18, 22),
    (28, 2, 20, 23),
    (29, 2, 23, 9),
    (30, 1, 9, 10),
    (31, 0, 22, 22),
    (32, 1, 30, 23),
    (33, 1, 35, 24),
    (34, 1, 13, 4),
    (35, 0, 27, 22),
    (36, 0, 36, 23),
    (37, 1, 37, 24),
    (38, 2, 10, 1),
    (39, 1, 4, 29),
    (40, 0, 39, 36),
    (41, 1, 38, 37),
    (42, 1, 44, 38),
    (43, 1, 8, 5),
    (44, 0, 42, 36),
    (45, 1, 40, 37),
    (46, 1, 47, 38),
    (47, 0, 16, 7),
    (48, 1, 39, 8),
    (49, 1, 47, 10),
    (50, 1, 27, 11),
    (51, 0, 40, 24),
    (52, 1, 39, 25),
    (53, 0, 55, 26),
    (54, 2, 24, 15),
    (55, 1, 16, 31),
    (56, 0, 46, 40),
    (57, 1, 49, 41),
    (58, 1, 60, 42),
    (59, 0, 25, 10),
    (60, 0, 38, 11),
    (61, 0, 58, 1),
    (62, 4, 51, 1),
    (63, 2, 14, 4),
    (64, 1, 4, 50),
    (65, 0, 61, 61),
    (66, 0, 71, 62),
    (67, 2, 63, 63),
    (68, 2, 2, 5),
    (69, 1, -2, 67),
];
