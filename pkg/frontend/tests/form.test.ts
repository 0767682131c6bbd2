import { describe, expect, it } from 'vitest';

import {
  conflictingAnnotation,
  emptyForm,
  formFromRecord,
  toRecord,
  topicDisabled,
  validateForm,
  withAdType,
} from '../src/form.js';
import type { AnnotationRecord } from '../src/types.js';

describe('annotation form coherence', () => {
  it('requires an ad type', () => {
    expect(validateForm(emptyForm())).toEqual(['choose an ad type']);
  });

  it('rejects a non-ad with a topic', () => {
    expect(validateForm({ adType: 'non_ad', adTopic: 'beauty' })).toEqual([
      'a non-ad cannot carry a topic',
    ]);
  });

  it('requires a topic for ads', () => {
    expect(validateForm({ adType: 'undisclosed', adTopic: '' })).toEqual(['an ad needs a topic']);
  });

  it('accepts coherent combinations', () => {
    expect(validateForm({ adType: 'non_ad', adTopic: '' })).toEqual([]);
    expect(validateForm({ adType: 'formal', adTopic: 'other' })).toEqual([]);
  });

  it('disables the topic selector exactly for non-ads', () => {
    expect(topicDisabled({ adType: 'non_ad', adTopic: '' })).toBe(true);
    expect(topicDisabled({ adType: 'disclosed', adTopic: 'gaming' })).toBe(false);
    expect(topicDisabled(emptyForm())).toBe(false);
  });

  it('clears the topic when switching to non-ad', () => {
    const form = withAdType({ adType: 'formal', adTopic: 'beauty' }, 'non_ad');
    expect(form).toEqual({ adType: 'non_ad', adTopic: '' });
  });

  it('keeps the topic when switching between ad types', () => {
    const form = withAdType({ adType: 'formal', adTopic: 'beauty' }, 'undisclosed');
    expect(form.adTopic).toBe('beauty');
  });
});

describe('record building', () => {
  it('omits ad_topic for non-ads', () => {
    expect(toRecord('a1', 'v1', { adType: 'non_ad', adTopic: '' })).toEqual({
      annotator_id: 'a1',
      video_id: 'v1',
      ad_type: 'non_ad',
    });
  });

  it('includes ad_topic for ads', () => {
    expect(toRecord('a1', 'v1', { adType: 'disclosed', adTopic: 'gaming' })).toEqual({
      annotator_id: 'a1',
      video_id: 'v1',
      ad_type: 'disclosed',
      ad_topic: 'gaming',
    });
  });

  it('refuses to build an incoherent record', () => {
    expect(() => toRecord('a1', 'v1', { adType: 'non_ad', adTopic: 'beauty' })).toThrow(
      /non-ad cannot carry a topic/,
    );
  });

  it('round-trips through form prefill', () => {
    const record: AnnotationRecord = {
      annotator_id: 'a1',
      video_id: 'v1',
      ad_type: 'undisclosed',
      ad_topic: 'fitness',
    };
    expect(toRecord('a1', 'v1', formFromRecord(record))).toEqual(record);
  });
});

describe('relabel conflict detection', () => {
  const stored: AnnotationRecord[] = [
    { annotator_id: 'a1', video_id: 'v1', ad_type: 'formal', ad_topic: 'other' },
    { annotator_id: 'a2', video_id: 'v1', ad_type: 'non_ad' },
  ];

  it('flags a differing relabel by the same annotator', () => {
    const conflict = conflictingAnnotation(stored, 'a1', { adType: 'disclosed', adTopic: 'other' });
    expect(conflict?.ad_type).toBe('formal');
  });

  it('is silent when the label is unchanged', () => {
    expect(conflictingAnnotation(stored, 'a1', { adType: 'formal', adTopic: 'other' })).toBeNull();
  });

  it('ignores other annotators', () => {
    expect(conflictingAnnotation(stored, 'a3', { adType: 'formal', adTopic: 'other' })).toBeNull();
  });
});
