/** Slider-driven requests: 300 ms debounce, latest response wins. */

export const DEBOUNCE_MS = 300;

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number = DEBOUNCE_MS,
): { call: (...args: A) => void; cancel: () => void } {
  let timer: ReturnType<typeof setTimeout> | null = null;
  return {
    call(...args: A) {
      if (timer !== null) clearTimeout(timer);
      timer = setTimeout(() => {
        timer = null;
        fn(...args);
      }, ms);
    },
    cancel() {
      if (timer !== null) clearTimeout(timer);
      timer = null;
    },
  };
}

/**
 * Wrap an async producer so that out-of-order responses are dropped: only
 * the newest in-flight request may deliver.
 */
export function latestWins<A extends unknown[], R>(
  fn: (...args: A) => Promise<R>,
): (...args: A) => Promise<R | undefined> {
  let token = 0;
  return async (...args: A) => {
    const mine = ++token;
    const result = await fn(...args);
    return mine === token ? result : undefined;
  };
}
