// Plain-JS glue: read the controls, call into the wasm module, draw
// matrices as phase/magnitude heatmaps and residuals as log bars.

import init, {
  explore_construction,
  classify_perturbed,
  norm_one_example,
} from "./pkg/gramian_kit_demo.js";

const $ = (id) => document.getElementById(id);

// ---- rendering helpers ----------------------------------------------------

function drawHeatmap(matrix, label) {
  const { rows, cols, re, im } = matrix;
  const cell = Math.max(10, Math.min(34, Math.floor(170 / Math.max(rows, cols))));
  const canvas = document.createElement("canvas");
  canvas.className = "heatmap";
  canvas.width = cols * cell;
  canvas.height = rows * cell;
  const ctx = canvas.getContext("2d");

  let maxMag = 0;
  for (let i = 0; i < rows; i++)
    for (let j = 0; j < cols; j++)
      maxMag = Math.max(maxMag, Math.hypot(re[i][j], im[i][j]));
  if (maxMag === 0) maxMag = 1;

  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) {
      const mag = Math.hypot(re[i][j], im[i][j]) / maxMag;
      const phase = Math.atan2(im[i][j], re[i][j]);
      const hue = ((phase * 180) / Math.PI + 360) % 360;
      const light = 8 + 62 * mag;
      ctx.fillStyle = mag < 1e-12 ? "#0d1117" : `hsl(${hue} 65% ${light}%)`;
      ctx.fillRect(j * cell, i * cell, cell - 1, cell - 1);
    }
  }

  const figure = document.createElement("figure");
  figure.appendChild(canvas);
  const caption = document.createElement("figcaption");
  caption.textContent = label;
  figure.appendChild(caption);
  return figure;
}

function showMatrices(containerId, entries) {
  const container = $(containerId);
  container.replaceChildren();
  for (const [label, matrix] of entries) {
    container.appendChild(drawHeatmap(matrix, label));
  }
}

const LOG_FLOOR = -17;

function residualBar(name, value, threshold) {
  const row = document.createElement("div");
  row.className = "bar-row";
  const nameEl = document.createElement("span");
  nameEl.className = "name";
  nameEl.textContent = name;

  const track = document.createElement("div");
  track.className = "bar-track";
  const fill = document.createElement("div");
  fill.className = "bar-fill" + (value > threshold ? " over" : "");
  const logv = value > 0 ? Math.max(LOG_FLOOR, Math.log10(value)) : LOG_FLOOR;
  fill.style.width = `${(100 * (logv - LOG_FLOOR)) / -LOG_FLOOR}%`;
  const thresh = document.createElement("div");
  thresh.className = "bar-thresh";
  thresh.style.left = `${(100 * (Math.log10(threshold) - LOG_FLOOR)) / -LOG_FLOOR}%`;
  track.appendChild(fill);
  track.appendChild(thresh);

  const valueEl = document.createElement("span");
  valueEl.className = "value";
  valueEl.textContent = value === 0 ? "0" : value.toExponential(2);

  row.appendChild(nameEl);
  row.appendChild(track);
  row.appendChild(valueEl);
  return row;
}

function showBars(containerId, pairs, threshold) {
  const container = $(containerId);
  container.replaceChildren();
  for (const [name, value] of pairs) {
    container.appendChild(residualBar(name, value, threshold));
  }
}

function setStatus(id, html) {
  $(id).innerHTML = html;
}

// ---- section 1: construction ----------------------------------------------

function renderConstruction() {
  const n = +$("c-n").value, d = +$("c-d").value;
  const rank = +$("c-rank").value, seed = +$("c-seed").value;
  const gap = +$("c-gap").value / 100;
  $("c-gap-out").value = gap.toFixed(2);

  const body = JSON.parse(explore_construction(n, d, rank, gap, seed));
  if (body.error === "hypothesis-violated") {
    showMatrices("c-matrices", []);
    showBars("c-bars", [], 1e-8);
    setStatus(
      "c-status",
      `<span class="err">rejected:</span> measured &#8214;P&#8722;Q&#8214; = ${body.gap.toFixed(6)} is not &lt; 1 — the construction refuses the pair (exit code 2 on the CLI).`
    );
    return;
  }
  if (body.error) {
    showMatrices("c-matrices", []);
    showBars("c-bars", [], 1e-8);
    setStatus("c-status", `<span class="err">${body.error}</span>`);
    return;
  }

  showMatrices("c-matrices", [
    ["P", body.p.matrix],
    ["Q", body.q.matrix],
    ["A = I + P(Q−P)P", body.a.matrix],
    ["T = Q A^{-1/2} P", body.t.matrix],
  ]);
  const t = body.trace;
  showBars("c-bars", [
    ["‖I−A‖ ≤ gap", t.neumann_bound],
    ["positivity of A", t.positivity_worst],
    ["PA = AP", t.pa_commute],
    ["PA = PQP", t.pa_eq_pqp],
    ["P commutes with A^{±1/2}", t.sqrt_commute],
    ["T* = P A^{-1/2} Q", t.tstar_formula],
    ["TP = T = QP A^{-1/2}", t.tp_eq_t],
    ["T*T = P", t.tstar_t_eq_p],
    ["TT* = Q A^{-1} P Q", t.ttstar_formula],
    ["TT* = Q", t.ttstar_eq_q],
    ["series vs spectral A^{-1/2}", t.sqrt_method_agreement],
  ], 1e-8);
  const order = t.ttstar_leq_q && t.complement_leq
    ? '<span class="ok">TT* ≤ Q and I−TT* ≤ I−Q hold</span>'
    : '<span class="err">a Loewner order check failed</span>';
  const verdict = body.is_partial_isometry
    ? '<span class="ok">T classifies as a partial gramian isometry</span>'
    : '<span class="err">T failed classification</span>';
  setStatus(
    "c-status",
    `measured gap ${body.gap.toFixed(9)} · ${verdict} · ${order}`
  );
}

// ---- section 2: classifier --------------------------------------------------

function renderClassification() {
  const n = +$("k-n").value, d = +$("k-d").value;
  const rank = +$("k-rank").value, seed = +$("k-seed").value;
  // Slider is log-scaled: 0, then 1e-12 .. ~0.3.
  const raw = +$("k-eps").value;
  const eps = raw === 0 ? 0 : Math.pow(10, -12 + (raw / 100) * 11.5);
  $("k-eps-out").value = eps === 0 ? "0" : eps.toExponential(2);

  const body = JSON.parse(classify_perturbed(n, d, rank, eps, seed));
  if (body.error) {
    showMatrices("k-matrices", []);
    $("k-verdicts").replaceChildren();
    showBars("k-bars", [], 1e-8);
    setStatus("k-status", `<span class="err">${body.error}</span>`);
    return;
  }
  const r = body.report;
  showMatrices("k-matrices", [
    ["T (perturbed)", body.t.matrix],
    ["T*T", r.initial_projection.matrix],
    ["TT*", r.final_projection.matrix],
  ]);

  const verdicts = [
    ["T*T is a projection", r.cond_ii.ok],
    ["TT* is a projection", r.cond_iii.ok],
    ["TT*T = T", r.cstar_residual <= 1e-8],
    ["T* passes too", r.cond_iv_ok],
  ];
  const verdictBox = $("k-verdicts");
  verdictBox.replaceChildren();
  for (const [label, ok] of verdicts) {
    const pill = document.createElement("span");
    pill.className = `verdict ${ok}`;
    pill.textContent = `${label}: ${ok ? "yes" : "no"}`;
    verdictBox.appendChild(pill);
  }

  showBars("k-bars", [
    ["T*T selfadjointness", r.cond_ii.selfadjoint_residual],
    ["T*T idempotency", r.cond_ii.idempotent_residual],
    ["TT* selfadjointness", r.cond_iii.selfadjoint_residual],
    ["TT* idempotency", r.cond_iii.idempotent_residual],
    ["‖TT*T − T‖", r.cstar_residual],
    ["T*T vs range(T*)", r.agreement_residuals.initial_vs_adjoint_range],
    ["TT* vs range(T)", r.agreement_residuals.final_vs_range],
  ], 1e-8);

  const overall = r.is_partial_isometry
    ? '<span class="ok">partial gramian isometry</span>'
    : '<span class="err">not a partial isometry</span>';
  const marginal = r.marginal
    ? ' · <span class="warn">marginal: residuals sit within a decade of the tolerance</span>'
    : "";
  setStatus("k-status", `${overall}${marginal}`);
}

// ---- section 3: norm-one example --------------------------------------------

function renderNormOne() {
  const n = +$("r-n").value, d = +$("r-d").value;
  const body = JSON.parse(norm_one_example(n, d));
  if (body.error) {
    showMatrices("r-matrices", []);
    setStatus("r-status", `<span class="err">${body.error}</span>`);
    return;
  }
  showMatrices("r-matrices", [
    ["P", body.p.matrix],
    ["Q", body.q.matrix],
    ["T (block shift)", body.t.matrix],
  ]);
  const bits = [
    `&#8214;P&#8722;Q&#8214; = ${body.gap.toFixed(12)}`,
    body.t_is_partial_isometry
      ? '<span class="ok">T*T = P and TT* = Q hold exactly</span>'
      : '<span class="err">classification failed</span>',
    body.build_rejected
      ? '<span class="warn">the construction rejects the pair (gap not &lt; 1)</span>'
      : '<span class="err">expected a hypothesis rejection</span>',
  ];
  setStatus("r-status", bits.join(" · "));
}

// ---- wiring ------------------------------------------------------------------

async function main() {
  try {
    await init();
  } catch (e) {
    const box = $("load-error");
    box.hidden = false;
    box.textContent =
      `Failed to load the wasm module (${e}). Build it first: see build-demo.sh.`;
    return;
  }
  const hook = (ids, fn) => {
    for (const id of ids) $(id).addEventListener("input", fn);
    fn();
  };
  hook(["c-n", "c-d", "c-rank", "c-gap", "c-seed"], renderConstruction);
  hook(["k-n", "k-d", "k-rank", "k-eps", "k-seed"], renderClassification);
  hook(["r-n", "r-d"], renderNormOne);
}

main();
