//! Displayed chains, transcribed literally. Letters are units, `w` the Weyl element, `g_S`/`h_S` the
//! matrices g_x = [[0, 1], [1, x]] and h_x = [[1, x⁻¹], [0, 1]] at x = product of the subscript.

/// Bar part of λ(a, b), tensored with Y = (∞, 0) + (0, ∞).
pub const LAMBDA_Y: &str = "[a|b]+[w|ab]-[w|a]-[w|b]";

/// (coefficient, bar term, subscript z of X_z = (∞, 0, z)) for the ∂₂-part of λ(a, b).
pub const LAMBDA_DEL: &[(i64, &str, &str)] = &[(1, "[wab|wab]", "ab"), (-1, "[wa|wa]", "a"), (-1, "[wb|wb]", "b"), (1, "[w|w]", "1")];

/// Image of d¹(λ(a, b)) in the homogeneous resolution of A^×.
pub const D1_22_HOMOG: &str = "(1,a^{-1},(ab)^{-1})+(1,a,ab)+(1,(ab)^{-1},1)-(1,a^{-1},1)-(1,b^{-1},1)";

/// The same image in bar notation.
pub const D1_22_BAR: &str = "[a^{-1}|b^{-1}]+[a|b]+[a^{-1}b^{-1}|ab]-[a^{-1}|a]-[b^{-1}|b]";

/// Its d₃-witness.
pub const D1_22_WITNESS: &str = "[a^{-1}|b^{-1}|ab]-[b^{-1}|b|a]";

pub const D1_22_TARGET: &str = "[a|b]-[b|a]";

/// θ_z. The fifth term is [z|z⁻¹|g_z⁻¹]: with g_z in that slot (as first displayed) the
/// decomposition of [wz|wz] ⊗ ∂₂(X_z) fails, and the later homogeneous display of (wθ_z − θ_z)
/// uses g_z⁻¹ there.
pub const THETA: &str = "[g^{-1}_z|wz|wz]-[h_z|wz|wz]+[z^{-1}|g^{-1}_z|wz]-[z|h_z|wz]
    +[z|z^{-1}|g^{-1}_z]-[z^{-1}|z|h_z]+[z^{-1}|z|z^{-1}]";

/// θ_z with g_z in the fifth term.
pub const THETA_FIRST_DISPLAY: &str = "[g^{-1}_z|wz|wz]-[h_z|wz|wz]+[z^{-1}|g^{-1}_z|wz]-[z|h_z|wz]
    +[z|z^{-1}|g_z]-[z^{-1}|z|h_z]+[z^{-1}|z|z^{-1}]";

pub const THETA_TARGET: &str = "[z|z^{-1}|z]";

/// The displayed image of (wθ_z − θ_z) ⊗ (∞) before rewriting it as [z|z⁻¹|z].
pub const THETA_IMAGE: &str = "-[z^{-1}|z|z^{-1}]";

/// Bar part of Λ(a, b, c) tensored with Y.
pub const BIG_LAMBDA_Y: &str = "[ab|c]-[a|c]-[b|c]+[w|abc]-[w|ac]-[w|bc]-[w|ab]+[w|a]+[w|b]+[w|c]";

pub const BIG_LAMBDA_DEL: &[(i64, &str, &str)] = &[
    (1, "[wabc|wabc]", "abc"),
    (-1, "[wab|wab]", "ab"),
    (-1, "[wbc|wbc]", "bc"),
    (-1, "[wac|wac]", "ac"),
    (1, "[wa|wa]", "a"),
    (1, "[wb|wb]", "b"),
    (1, "[wc|wc]", "c"),
    (-1, "[w|w]", "1"),
];

/// Y-part of the lift of Λ.
pub const LIFT_Y: &str = "[w|ab|c]-[w|a|c]-[w|b|c]";

/// Φ = Σ coefficient · θ_subscript.
pub const PHI: &[(i64, &str)] = &[(1, "abc"), (-1, "ab"), (-1, "bc"), (-1, "ac"), (1, "a"), (1, "b"), (1, "c"), (-1, "1")];

pub const PSI: &str = "[wab|wab|c]-[wa|wa|c]-[wb|wb|c]+[w|w|c]
    +[c|wabc|wabc]-[c|wac|wac]-[c|wbc|wbc]+[c|wc|wc]
    +[ab|wab|c]-[a|wa|c]-[a|c|wac]+[ab|c|wabc]-[c|ab|wabc]+[c|a|wac]
    -[b|wb|c]-[b|c|wbc]+[c|b|wbc]-[b|a|c]+[b|c|a]-[c|b|a]";

/// Displayed image of (wΨ − Ψ) ⊗ (∞) in B₃(A^×) ⊗ Z.
pub const PSI_PUSHED: &str = "[c^{-1}|abc|(abc)^{-1}]-[c^{-1}|ac|(ac)^{-1}]-[c^{-1}|bc|(bc)^{-1}]+[c^{-1}|c|c^{-1}]
    -[a^{-1}|c^{-1}|ac]+[(ab)^{-1}|c^{-1}|abc]-[c^{-1}|(ab)^{-1}|abc]+[c^{-1}|a^{-1}|ac]
    -[b^{-1}|c^{-1}|bc]+[c^{-1}|b^{-1}|bc]-[b^{-1}|a^{-1}|c^{-1}]+[b^{-1}|c^{-1}|a^{-1}]
    -[c^{-1}|b^{-1}|a^{-1}]-[c|(abc)^{-1}|abc]+[c|(ac)^{-1}|ac]+[c|(bc)^{-1}|bc]
    -[c|c^{-1}|c]+[a|c|(ac)^{-1}]-[ab|c|(abc)^{-1}]+[c|ab|(abc)^{-1}]
    -[c|a|(ac)^{-1}]+[b|c|(bc)^{-1}]-[c|b|(bc)^{-1}]+[b|a|c]-[b|c|a]
    +[c|b|a]";

/// Displayed d²(Λ(a, b, c)) before the d₄-correction.
pub const D2_22_DISPLAY: &str = "[c^{-1}|abc|(abc)^{-1}]-[c^{-1}|ac|(ac)^{-1}]-[c^{-1}|bc|(bc)^{-1}]+[c^{-1}|c|c^{-1}]
    -[a^{-1}|c^{-1}|ac]+[(ab)^{-1}|c^{-1}|abc]-[c^{-1}|(ab)^{-1}|abc]+[c^{-1}|a^{-1}|ac]
    -[b^{-1}|c^{-1}|bc]+[c^{-1}|b^{-1}|bc]-[b^{-1}|a^{-1}|c^{-1}]+[b^{-1}|c^{-1}|a^{-1}]
    -[c^{-1}|b^{-1}|a^{-1}]-[c|(abc)^{-1}|abc]+[c|(ac)^{-1}|ac]+[c|(bc)^{-1}|bc]
    +[a|c|(ac)^{-1}]-[ab|c|(abc)^{-1}]+[c|ab|(abc)^{-1}]-[c|a|(ac)^{-1}]
    +[b|c|(bc)^{-1}]-[c|b|(bc)^{-1}]+[b|a|c]-[b|c|a]+[c|b|a]
    +[abc|(abc)^{-1}|abc]-[ab|(ab)^{-1}|ab]-[bc|(bc)^{-1}|bc]
    -[ac|(ac)^{-1}|ac]+[a|a^{-1}|a]+[b|b^{-1}|b]";

/// The 25-term chain whose d₄ is added to the display.
pub const D2_22_WITNESS: &str = "-[c|c^{-1}|abc|(abc)^{-1}]+[c|c^{-1}|ac|(ac)^{-1}]+[c|c^{-1}|bc|(bc)^{-1}]-[c|c^{-1}|a^{-1}|ac]
    -[c|c^{-1}|c|c^{-1}]-[c|c^{-1}|b^{-1}|bc]+[c^{-1}|c|(abc)^{-1}|abc]+[ac|a^{-1}|c^{-1}|ac]
    -[abc|(ab)^{-1}|c^{-1}|abc]+[bc|b^{-1}|c^{-1}|bc]+[c|ab|(ab)^{-1}|ab]-[c|b|b^{-1}|b]-[c|a|a^{-1}|a]
    -[c|a|b|(ab)^{-1}]-[a|b|c|(abc)^{-1}]+[abc|b^{-1}|a^{-1}|c^{-1}]-[abc|b^{-1}|c^{-1}|a^{-1}]
    +[a|c|c^{-1}|a^{-1}]-[a|bc|b^{-1}|c^{-1}]+[a|c|b|b^{-1}]+[ac|b|b^{-1}|a^{-1}]-[a|bc|(bc)^{-1}|a^{-1}]
    -[b|c|(bc)^{-1}|a^{-1}]+[c|c^{-1}|b^{-1}|a^{-1}]-[c|c^{-1}|c|(abc)^{-1}]";

/// −a∧b∧c.
pub const D2_22_TARGET: &str = "-[a|b|c]-[c|a|b]-[b|c|a]+[b|a|c]+[c|b|a]+[a|c|b]";
