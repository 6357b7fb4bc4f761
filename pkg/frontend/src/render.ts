/**
 * Text renderer: a pure function of the view model, used by the
 * terminal demo and by the snapshot tests. The layout mirrors the five
 * dashboard elements; the visual reference is a guide, not a pixel
 * contract.
 */
import type { DashboardViewModel } from "./viewModel.js";

const LEAF_SEGMENTS = 10;

function leafBar(fill: number): string {
  const filled = Math.round(fill * LEAF_SEGMENTS);
  return "[" + "#".repeat(filled) + ".".repeat(LEAF_SEGMENTS - filled) + "]";
}

function connectionLine(vm: DashboardViewModel): string {
  if (vm.connection === "disconnected") return "!! DISCONNECTED !!";
  if (vm.connection === "connecting") return ".. connecting ..";
  return vm.stale ? "~~ STALE (no recent frame) ~~" : "link ok";
}

export function renderDashboard(vm: DashboardViewModel): string {
  const cruiseArrow = vm.cruise.targetArrowKmh === null
    ? "--"
    : `->${vm.cruise.targetArrowKmh.toFixed(0)} km/h`;
  const cruiseState = vm.cruise.engaged ? "ENGAGED" : "off";
  const cruiseLock = vm.cruise.controlsEnabled ? "" : " [controls locked]";
  const banner = vm.failSafe.severity === "none"
    ? ""
    : `\n*** class ${vm.failSafe.activeClass}: ${vm.failSafe.message}` +
      (vm.failSafe.engineOff ? " (ENGINE OFF)" : "") +
      ` errors=${JSON.stringify(vm.failSafe.activeErrors)} ***`;
  return [
    `=== scootsim dashboard (${connectionLine(vm)}) ===`,
    `velocity  green ${vm.velocity.scooterKmh.toFixed(1).padStart(5)} km/h` +
      `   set blue ${vm.velocity.setKmh.toFixed(1).padStart(5)} km/h`,
    `cruise    (CC) ${cruiseState} ${cruiseArrow}${cruiseLock}`,
    `eco leaf  ${leafBar(vm.ecoLeaf.fillFraction)} ` +
      `${(vm.ecoLeaf.fillFraction * 100).toFixed(0).padStart(3)} %` +
      `  (${vm.ecoLeaf.consumptionTooltip})`,
    `engine    ${vm.evaluation.engineRpm.toFixed(0).padStart(5)} rpm` +
      `   injection ${vm.evaluation.injectionRateMlS.toFixed(2)} ml/s` +
      `   rec ${vm.evaluation.recording ? "ON " : "off"}`,
    `mode      ${vm.modeIndicator === "VC" ? "VELOCITY CONTROL" : "ORIGINAL RESTRICTION"}` +
      banner,
  ].join("\n");
}
