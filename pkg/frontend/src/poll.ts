/** Job polling: one in-flight request per job, fixed 500 ms interval,
 * stops on terminal states. */

import type { NetboostApi } from "./api.js";
import type { JobRecord, JobStatus } from "./types.js";

export const POLL_INTERVAL_MS = 500;

const TERMINAL: ReadonlySet<JobStatus> = new Set(["DONE", "FAILED", "CANCELLED"]);

export function isTerminal(status: JobStatus): boolean {
  return TERMINAL.has(status);
}

export async function pollJob(
  api: NetboostApi,
  jobId: string,
  onUpdate: (record: JobRecord) => void,
  intervalMs: number = POLL_INTERVAL_MS,
): Promise<JobRecord> {
  for (;;) {
    const record = await api.job(jobId);
    onUpdate(record);
    if (isTerminal(record.status)) return record;
    await new Promise((resolve) => setTimeout(resolve, intervalMs));
  }
}
